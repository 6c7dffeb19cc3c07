#ifndef LOCARAY_VERIFY_H_
#define LOCARAY_VERIFY_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "locaray/model.h"

namespace locaray {

// Interactions that share one covering row set. Members are in canonical
// order; every unordered pair of members is one collision.
struct CollisionGroup {
  RowSet rows;
  std::vector<Interaction> members;
};

struct VerifyReport {
  int strength = 0;
  std::int64_t num_interactions = 0;
  bool is_covering = false;         // no interaction has an empty row set
  bool is_locating_exact1 = false;  // all row sets pairwise distinct
  bool is_locating_1bar = false;    // both of the above
  std::vector<Interaction> uncovered;
  // Includes the group of uncovered interactions when it has two or more
  // members, since those share the empty row set.
  std::vector<CollisionGroup> collision_groups;

  // Exact number of colliding unordered pairs.
  std::int64_t collision_count() const;

  struct Collision {
    Interaction first;
    Interaction second;
    RowSet rows;
  };
  // The first `limit` colliding pairs, ordered by group then member position.
  std::vector<Collision> Collisions(std::int64_t limit = INT64_MAX) const;
};

// Recomputes every row set from the definition of coverage. Shares no code
// with the incremental cost engine. Throws DomainError unless 1 <= t <= k.
VerifyReport Verify(const TestArray& array, int strength);

// Every strength-t interaction whose row set equals `failing` exactly. An
// empty failing set means no fault and yields an empty list. Throws
// DomainError if `failing` was sized for a different number of rows.
std::vector<Interaction> LocateFault(const TestArray& array,
                                     const RowSet& failing, int strength);

}  // namespace locaray

#endif  // LOCARAY_VERIFY_H_
