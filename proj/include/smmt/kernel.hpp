#pragma once

#include <optional>
#include <vector>

#include "smmt/predicate.hpp"
#include "smmt/sat.hpp"

namespace smmt {

/// Theory layer over a fixed set of monotonic predicates. Propagates from the
/// under/over-approximations and hands out witness-strengthened lemmas.
class TheoryKernel : public TheoryHooks {
public:
  explicit TheoryKernel(std::vector<const MonotonicPredicate*> preds, bool attach_witnesses = true);

  Propagation propagate(const Assignment& m) override;
  TheoryLemma explain(TheoryHandle h) override;
  std::optional<TheoryHandle> final_check(const Assignment& m) override;
  void backtrack(std::size_t trail_size) override;

  std::size_t lemmas_created() const { return next_id_; }
  std::size_t live_handles() const { return entries_.size(); }

private:
  struct Entry {
    TheoryHandle id;
    std::size_t pred;
    std::size_t created_at;
    TheoryLemma lemma;
    bool has_witness;
  };
  TheoryHandle push(std::size_t pred, std::size_t created_at, TheoryLemma lemma);

  std::vector<const MonotonicPredicate*> preds_;
  bool witnesses_;
  std::vector<Entry> entries_;  ///< ids and created_at both increasing
  TheoryHandle next_id_ = 0;
};

}  // namespace smmt
