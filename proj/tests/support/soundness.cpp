#include "soundness.hpp"

#include <sstream>

#include "count_oracle.hpp"
#include "mtmorph/checker.hpp"
#include "mtmorph/engine.hpp"
#include "mtmorph/mrgen.hpp"
#include "mtmorph/mutator.hpp"

namespace mtmorph::testing {

namespace {

std::map<std::string, long> difference(const std::map<std::string, long>& after,
                                       const std::map<std::string, long>& before) {
  std::map<std::string, long> out;
  for (const auto& [type, n] : after) out[type] = n - before.at(type);
  return out;
}

}  // namespace

SoundnessOutcome check_soundness(const RandomCase& rc) {
  SoundnessOutcome outcome;
  std::ostringstream why;
  auto fail = [&](const std::string& msg) {
    outcome.ok = false;
    why << "seed " << rc.seed << ": " << msg << "\n";
  };

  try {
    const ExecutionResult r1 = execute_transformation(rc.program, rc.model, rc.src, rc.tgt);
    if (scan_counts(r1.target, rc.tgt) != predicted_counts(rc.program, rc.model, rc.tgt)) {
      fail("engine counts differ from the prediction on C1");
    }
    const auto patterns =
        extract_patterns(std::vector{r1.traces}, std::vector{rc.model}, std::vector{r1.target});
    const GenerationResult g = generate_mrs(patterns, rc.src, rc.tgt, &rc.program);
    outcome.relations = g.relations.size();

    const auto reports =
        run_metamorphic_pipeline(rc.program, rc.model, g.relations, rc.src, rc.tgt);
    for (const auto& rep : reports) {
      if (rep.skipped) {
        ++outcome.skipped;
      } else if (!rep.pass) {
        fail("relation " + rep.mr + " fails on the transformation it was derived from");
      }
    }

    for (const auto& mr : g.relations) {
      if (mr.clauses.size() != rc.tgt.types.size()) fail(mr.id + ": clause count");
      Model c2;
      try {
        c2 = apply_mutation(rc.model, mr.mutation, rc.src);
      } catch (const InfeasibleMutation&) {
        continue;
      }
      const auto t2 = execute_transformation(rc.program, c2, rc.src, rc.tgt).target;
      const auto scanned = difference(scan_counts(t2, rc.tgt), scan_counts(r1.target, rc.tgt));
      const auto predicted = difference(predicted_counts(rc.program, c2, rc.tgt),
                                        predicted_counts(rc.program, rc.model, rc.tgt));
      for (const auto& clause : mr.clauses) {
        if (scanned.at(clause.type) != clause.delta) {
          fail(mr.id + ": " + clause.type + " delta " + std::to_string(clause.delta) +
               ", scanned " + std::to_string(scanned.at(clause.type)));
        }
        if (predicted.at(clause.type) != clause.delta) {
          fail(mr.id + ": " + clause.type + " delta " + std::to_string(clause.delta) +
               ", predicted " + std::to_string(predicted.at(clause.type)));
        }
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("unexpected exception: ") + e.what());
  }
  outcome.failure = why.str();
  return outcome;
}

}  // namespace mtmorph::testing
