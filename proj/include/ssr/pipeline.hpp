#pragma once

#include <map>
#include <optional>
#include <string>

#include "ssr/alteration.hpp"
#include "ssr/subdivision.hpp"

namespace ssr {

enum class StepKind { cut, star, triangulate, pullback, join, alteration, barycentric, mbs };
enum class Side { source, target };

std::string to_string(StepKind kind);
std::string to_string(Side side);
StepKind step_kind_from_string(const std::string& s);
Side side_from_string(const std::string& s);

struct TraceStep {
  StepKind kind = StepKind::star;
  Side side = Side::source;
  std::size_t round = 0;
  std::vector<QVector> normals;                              // cut
  QVector point;                                             // star
  std::vector<std::size_t> ray_order;                        // triangulate
  std::vector<std::size_t> order;                            // barycentric
  MBSData marked;                                            // mbs
  std::map<std::size_t, std::vector<QVector>> fiber_points;  // join: star points per target ray
  AlterationSpec alteration;
  std::optional<GoodFunction> certificate;
  std::string digest;  // state after the step
  Integer source_multiplicity = 1;
};

struct RoundRecord {
  std::size_t round = 0;
  Integer multiplicity_before = 1;
  Integer multiplicity_after = 1;
  std::size_t source_cones = 0;
  std::size_t target_cones = 0;
};

struct TraceFailure {
  int exit_code = 0;
  std::string message;
};

struct ReductionTrace {
  std::string initial_digest;
  std::string final_digest;
  bool complete = false;
  std::optional<TraceFailure> failure;
  std::vector<TraceStep> steps;
  std::vector<RoundRecord> rounds;  // round 0 is the preparation
  std::size_t reduction_rounds = 0;
};

struct ReduceOptions {
  std::size_t max_rounds = 32;
  Integer max_dilation = 24;
};

// Morphism under construction. Target-side preparation steps accumulate in
// `pending` until a pullback or marked subdivision brings the source along.
struct PipelineState {
  ComplexMorphism current;
  std::optional<Subdivision> pending;
};

std::string state_digest(const PipelineState& state);

// Applies one recorded step; returns the subdivision it performed, if any.
// Fills in the certificate when the step does not carry one.
std::optional<Subdivision> apply_step(PipelineState& state, TraceStep& step);

// Every source ray maps onto a target ray, the target is nonsingular and the map simplicial.
ValidationReport check_prepared(const ComplexMorphism& f);

ComplexMorphism prepare(const ComplexMorphism& f, std::size_t max_rounds, ReductionTrace& trace);

// Runs the full reduction, filling `trace` as it goes so that a failure leaves
// the completed steps behind.
ComplexMorphism run_reduction(const ComplexMorphism& f, const ReduceOptions& options, ReductionTrace& trace);

struct Reduction {
  ComplexMorphism morphism;
  ReductionTrace trace;
};
Reduction reduce(const ComplexMorphism& f, const ReduceOptions& options = {});

ValidationReport verify_trace(const ComplexMorphism& initial, const ReductionTrace& trace);

}  // namespace ssr
