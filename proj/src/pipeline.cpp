#include "ssr/pipeline.hpp"

#include <set>

#include "ssr/fiber.hpp"
#include "ssr/io.hpp"
#include "ssr/join.hpp"
#include "ssr/reduction.hpp"

namespace ssr {

namespace {

const std::vector<std::pair<StepKind, std::string>> kStepNames{
    {StepKind::cut, "cut"},         {StepKind::star, "star"},
    {StepKind::triangulate, "triangulate"}, {StepKind::pullback, "pullback-refine"},
    {StepKind::join, "join"},       {StepKind::alteration, "lattice-alteration"},
    {StepKind::barycentric, "barycentric"}, {StepKind::mbs, "mbs"}};

Integer source_multiplicity(const ComplexMorphism& f) {
  return f.source().simplicial() ? max_multiplicity(f.source()) : Integer(0);
}

void push_pending(PipelineState& state, const Subdivision& sub) {
  state.pending = state.pending ? compose(*state.pending, sub) : sub;
}

const Complex& target_base(const PipelineState& state) {
  return state.pending ? state.pending->result : state.current.target();
}

void require_settled(const PipelineState& state, const TraceStep& step) {
  if (state.pending)
    throw InvalidInput(to_string(step.kind) + " step on the source while target steps are pending");
}

// Primitive direction with a positive leading entry, so n and -n coincide.
QVector hyperplane_key(const QVector& v) {
  QVector p = primitive_integer_direction(v);
  for (const auto& x : p) {
    if (x == 0) continue;
    if (x < 0) p = scale(p, -1);
    break;
  }
  return p;
}

// Hyperplanes whose cuts make every image of a source cone a union of target cells.
std::vector<QVector> image_cut_normals(const ComplexMorphism& f, const Complex& target) {
  const std::size_t n = target.ambient_dim();
  std::set<QVector> normals;
  for (std::size_t s = 0; s < f.source().cone_count(); ++s) {
    std::vector<QVector> gens;
    for (auto& y : f.image_generators(s))
      if (!is_zero(y)) gens.push_back(y);
    if (gens.empty()) continue;
    ConeGeometry image(gens, n);
    for (const auto& facet : image.facets())
      if (!is_zero(facet.normal)) normals.insert(hyperplane_key(facet.normal));
    QMatrix ann = nullspace(image.span().rows());
    for (std::size_t i = 0; i < ann.rows(); ++i) normals.insert(hyperplane_key(ann.row(i)));
  }
  std::vector<QVector> splitting;
  for (const auto& normal : normals) {
    bool splits = false;
    for (auto t : target.maximal_cones()) {
      bool pos = false, neg = false;
      for (const auto& g : target.generators(t)) {
        Rational v = dot(normal, g);
        if (v > 0) pos = true;
        if (v < 0) neg = true;
      }
      if (pos && neg) splits = true;
    }
    if (splits) splitting.push_back(normal);
  }
  return splitting;
}

std::optional<std::size_t> first_singular_cone(const Complex& c) {
  for (auto m : c.maximal_cones())
    if (multiplicity(c, m) != 1) return m;
  return std::nullopt;
}

class Recorder {
 public:
  Recorder(PipelineState& state, ReductionTrace& trace) : state_(state), trace_(trace) {}

  void run(TraceStep step) {
    auto sub = apply_step(state_, step);
    if (sub) {
      auto report = verify_projectivity(sub->result, sub->base, sub->certificate);
      if (!report.ok())
        throw InvariantViolation(to_string(step.kind) + " step produced a rejected certificate: " + report.issues.front());
    }
    if (!state_.pending) {
      auto report = validate_morphism(state_.current);
      if (!report.ok())
        throw InvariantViolation(to_string(step.kind) + " step produced an invalid morphism: " + report.issues.front());
    }
    finish(std::move(step));
  }

  void finish(TraceStep step) {
    step.digest = state_digest(state_);
    step.source_multiplicity = source_multiplicity(state_.current);
    trace_.steps.push_back(std::move(step));
  }

 private:
  PipelineState& state_;
  ReductionTrace& trace_;
};

void prepare_state(PipelineState& state, std::size_t max_rounds, ReductionTrace& trace) {
  Recorder rec(state, trace);
  for (std::size_t round = 0;; ++round) {
    if (check_prepared(state.current).ok()) break;
    if (round == max_rounds)
      throw BoundExhausted("preparation did not finish within " + std::to_string(max_rounds) + " rounds");
    const std::size_t before = trace.steps.size();
    const ComplexMorphism& f = state.current;
    auto step = [&](StepKind kind, Side side) {
      TraceStep s;
      s.kind = kind;
      s.side = side;
      return s;
    };

    auto normals = image_cut_normals(f, f.target());
    if (!normals.empty()) {
      TraceStep s = step(StepKind::cut, Side::target);
      s.normals = normals;
      rec.run(std::move(s));
    }
    for (const auto& v : f.source().rays()) {
      QVector y = f.image(v);
      auto carrier = target_base(state).carrier(y);
      if (!carrier || target_base(state).cone(*carrier).dim < 2) continue;
      TraceStep s = step(StepKind::star, Side::target);
      s.point = y;
      rec.run(std::move(s));
    }
    if (!target_base(state).simplicial()) {
      TraceStep s = step(StepKind::triangulate, Side::target);
      for (std::size_t i = 0; i < target_base(state).rays().size(); ++i) s.ray_order.push_back(i);
      rec.run(std::move(s));
    }
    for (std::size_t guard = 0;; ++guard) {
      auto singular = first_singular_cone(target_base(state));
      if (!singular) break;
      if (guard == 10000) throw BoundExhausted("target resolution did not finish");
      TraceStep s = step(StepKind::star, Side::target);
      s.point = waterman_points(target_base(state), *singular).at(1).point;
      rec.run(std::move(s));
    }
    if (state.pending) rec.run(step(StepKind::pullback, Side::source));
    if (!state.current.source().simplicial()) {
      TraceStep s = step(StepKind::triangulate, Side::source);
      for (std::size_t i = 0; i < state.current.source().rays().size(); ++i) s.ray_order.push_back(i);
      rec.run(std::move(s));
    }
    if (trace.steps.size() == before) {
      auto report = check_prepared(state.current);
      throw InvariantViolation("preparation stalled: " + report.issues.front());
    }
  }
  const ComplexMorphism& f = state.current;
  std::vector<bool> hit(f.target().cone_count(), false);
  for (std::size_t s = 0; s < f.source().cone_count(); ++s) hit[*f.image_cone(s)] = true;
  for (auto t : f.target().maximal_cones())
    if (!hit[t]) throw InvalidInput("map does not cover target cone " + f.target().describe(t));
}

void check_input(const ComplexMorphism& f) {
  std::vector<std::string> issues;
  for (auto& i : validate_complex(f.source()).issues) issues.push_back("source: " + i);
  for (auto& i : validate_complex(f.target()).issues) issues.push_back("target: " + i);
  if (issues.empty())
    for (auto& i : validate_morphism(f).issues) issues.push_back(i);
  if (!issues.empty()) throw ValidationError("invalid morphism: " + issues.front(), issues);
  std::size_t rel = relative_dimension(f);
  if (rel > 3) throw RelativeDimensionTooLarge("relative dimension " + std::to_string(rel) + " exceeds 3");
}

RoundRecord round_record(std::size_t round, const Integer& before, const ComplexMorphism& f) {
  return {round, before, source_multiplicity(f), f.source().maximal_cones().size(), f.target().maximal_cones().size()};
}

}  // namespace

std::string to_string(StepKind kind) {
  for (const auto& [k, name] : kStepNames)
    if (k == kind) return name;
  return "unknown";
}

std::string to_string(Side side) { return side == Side::source ? "source" : "target"; }

StepKind step_kind_from_string(const std::string& s) {
  for (const auto& [k, name] : kStepNames)
    if (name == s) return k;
  throw SchemaError("unknown step kind '" + s + "'");
}

Side side_from_string(const std::string& s) {
  if (s == "source") return Side::source;
  if (s == "target") return Side::target;
  throw SchemaError("unknown side '" + s + "'");
}

std::string state_digest(const PipelineState& state) {
  if (!state.pending) return digest(state.current);
  return sha256_hex(digest(state.current) + ":" + digest(state.pending->result));
}

std::optional<Subdivision> apply_step(PipelineState& state, TraceStep& step) {
  const IntMatrix& map = state.current.map();
  std::optional<Subdivision> sub;
  switch (step.kind) {
    case StepKind::cut:
      if (step.side != Side::target) throw InvalidInput("cut steps apply to the target");
      sub = cut_by_hyperplanes(target_base(state), step.normals);
      push_pending(state, *sub);
      break;
    case StepKind::star:
      if (step.side == Side::target) {
        sub = star_subdivide(target_base(state), step.point);
        push_pending(state, *sub);
      } else {
        require_settled(state, step);
        sub = star_subdivide(state.current.source(), step.point);
        state.current = ComplexMorphism(sub->result, state.current.target(), map);
      }
      break;
    case StepKind::triangulate:
      if (step.side == Side::target) {
        sub = triangulate_pulling(target_base(state), step.ray_order);
        push_pending(state, *sub);
      } else {
        require_settled(state, step);
        sub = triangulate_pulling(state.current.source(), step.ray_order);
        state.current = ComplexMorphism(sub->result, state.current.target(), map);
      }
      break;
    case StepKind::pullback:
      if (!state.pending) throw InvalidInput("pullback step without pending target steps");
      sub = pullback_refine(state.current, *state.pending);
      state.current = ComplexMorphism(sub->result, state.pending->result, map);
      state.pending.reset();
      break;
    case StepKind::barycentric:
      if (step.side != Side::target) throw InvalidInput("barycentric steps apply to the target");
      sub = barycentric_subdivide(target_base(state), step.order);
      push_pending(state, *sub);
      break;
    case StepKind::mbs:
      if (!state.pending) throw InvalidInput("marked subdivision step without a target subdivision");
      sub = mbs_subdivide(state.current.source(), step.marked);
      state.current = ComplexMorphism(sub->result, state.pending->result, map);
      state.pending.reset();
      break;
    case StepKind::join: {
      require_settled(state, step);
      std::map<std::size_t, Subdivision> fibers;
      for (const auto& [ray, points] : step.fiber_points) {
        fibers.emplace(ray, star_sequence(fiber_subcomplex(state.current, ray).map.source(), points).subdivision);
      }
      JoinResult joined = join_fiberwise(state.current, fibers);
      state.current = std::move(joined.morphism);
      sub = std::move(joined.subdivision);
      break;
    }
    case StepKind::alteration:
      require_settled(state, step);
      state.current = alter_lattices(state.current, step.alteration);
      break;
  }
  if (sub && !step.certificate) step.certificate = sub->certificate;
  return sub;
}

ValidationReport check_prepared(const ComplexMorphism& f) {
  ValidationReport report;
  if (!f.source().simplicial()) report.issues.push_back("source is not simplicial");
  if (!f.target().simplicial()) report.issues.push_back("target is not simplicial");
  else if (!is_nonsingular(f.target())) report.issues.push_back("target is singular");
  for (std::size_t r = 0; r < f.source().rays().size(); ++r) {
    auto cone = f.source().find({r});
    auto image = cone ? f.image_cone(*cone) : std::nullopt;
    if (!image || f.target().cone(*image).dim != 1)
      report.issues.push_back("source ray " + to_string(f.source().ray(r)) + " does not map onto a target ray");
  }
  if (report.ok() && !is_simplicial_map(f)) report.issues.push_back("map is not simplicial");
  return report;
}

ComplexMorphism prepare(const ComplexMorphism& f, std::size_t max_rounds, ReductionTrace& trace) {
  PipelineState state{f, std::nullopt};
  prepare_state(state, max_rounds, trace);
  return state.current;
}

ComplexMorphism run_reduction(const ComplexMorphism& f, const ReduceOptions& options, ReductionTrace& trace) {
  trace = ReductionTrace{};
  trace.initial_digest = digest(f);
  check_input(f);
  PipelineState state{f, std::nullopt};
  Integer start = source_multiplicity(f);
  prepare_state(state, options.max_rounds, trace);
  trace.rounds.push_back(round_record(0, start, state.current));
  const Integer prepared_multiplicity = max_multiplicity(state.current.source());

  Recorder rec(state, trace);
  for (std::size_t round = 1;; ++round) {
    if (round > options.max_rounds)
      throw BoundExhausted("reduction did not finish within " + std::to_string(options.max_rounds) + " rounds");
    const Integer before = max_multiplicity(state.current.source());

    TraceStep join;
    join.kind = StepKind::join;
    join.round = round;
    TraceStep alteration;
    alteration.kind = StepKind::alteration;
    alteration.round = round;
    bool subdivide = false;
    for (std::size_t t = 0; t < state.current.target().rays().size(); ++t) {
      if (restrict_semistable_check(state.current, t)) continue;
      RaySemistable rs = semistabilize_over_ray(fiber_subcomplex(state.current, t), options.max_dilation);
      if (!rs.points.empty()) {
        join.fiber_points[t] = rs.points;
        subdivide = true;
      }
      if (rs.multiplier != 1) alteration.alteration.multipliers[t] = rs.multiplier;
    }
    // Joined cells are compared with their source cone in the altered lattices,
    // where the fiber cells are unimodular.
    const ComplexMorphism reference = alter_lattices(state.current, alteration.alteration);
    if (subdivide) rec.run(std::move(join));
    if (!alteration.alteration.trivial()) rec.run(std::move(alteration));
    if (subdivide) {
      const Complex& fine = state.current.source();
      for (auto s : fine.maximal_cones()) {
        auto carrier = reference.source().carrier(barycenter(fine, s));
        if (!carrier) throw InvariantViolation("joined cell " + fine.describe(s) + " left the source");
        if (multiplicity(fine, s) > multiplicity(reference.source(), *carrier))
          throw InvariantViolation("join raised the multiplicity of " + fine.describe(s) + " above that of " +
                                   reference.source().describe(*carrier));
      }
    }

    auto verdict = check_semistable(state.current).verdict;
    if (verdict == Semistability::semistable) {
      trace.rounds.push_back(round_record(round, before, state.current));
      break;
    }
    if (verdict != Semistability::weakly_semistable)
      throw InvariantViolation("fiber stage did not produce a weakly semistable map");

    MBSData data = build_marked_data(state.current);
    InducedMap induced = reduce_step(state.current, data);
    TraceStep bs;
    bs.kind = StepKind::barycentric;
    bs.side = Side::target;
    bs.round = round;
    bs.order = default_order(state.current.target());
    bs.certificate = induced.target.certificate;
    state.pending = induced.target;
    rec.finish(std::move(bs));
    TraceStep mbs;
    mbs.kind = StepKind::mbs;
    mbs.round = round;
    mbs.marked = std::move(data);
    mbs.certificate = induced.source.certificate;
    state.current = induced.morphism;
    state.pending.reset();
    rec.finish(std::move(mbs));

    ++trace.reduction_rounds;
    trace.rounds.push_back(round_record(round, before, state.current));
    if (Integer(static_cast<unsigned long>(trace.reduction_rounds)) > prepared_multiplicity)
      throw InvariantViolation("more reduction rounds than the initial multiplicity");
  }
  trace.final_digest = digest(state.current);
  trace.complete = true;
  return state.current;
}

Reduction reduce(const ComplexMorphism& f, const ReduceOptions& options) {
  Reduction out;
  out.morphism = run_reduction(f, options, out.trace);
  return out;
}

ValidationReport verify_trace(const ComplexMorphism& initial, const ReductionTrace& trace) {
  ValidationReport report;
  if (digest(initial) != trace.initial_digest) {
    report.issues.push_back("initial morphism digest does not match the trace");
    return report;
  }
  PipelineState state{initial, std::nullopt};
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& recorded = trace.steps[i];
    const std::string where = "step " + std::to_string(i) + " (" + to_string(recorded.kind) + ")";
    TraceStep replay = recorded;
    replay.certificate.reset();
    std::optional<Subdivision> sub;
    try {
      sub = apply_step(state, replay);
    } catch (const std::exception& e) {
      report.issues.push_back(where + ": replay failed: " + e.what());
      return report;
    }
    if (sub) {
      if (!recorded.certificate) {
        report.issues.push_back(where + ": certificate missing");
      } else {
        if (!(*recorded.certificate == sub->certificate))
          report.issues.push_back(where + ": recorded certificate differs from the replayed one");
        for (auto& issue : verify_projectivity(sub->result, sub->base, *recorded.certificate).issues)
          report.issues.push_back(where + ": " + issue);
      }
    } else if (recorded.certificate) {
      report.issues.push_back(where + ": unexpected certificate");
    }
    if (!state.pending) {
      for (auto& issue : validate_complex(state.current.source()).issues)
        report.issues.push_back(where + ": source: " + issue);
      for (auto& issue : validate_complex(state.current.target()).issues)
        report.issues.push_back(where + ": target: " + issue);
      for (auto& issue : validate_morphism(state.current).issues) report.issues.push_back(where + ": " + issue);
    }
    if (state_digest(state) != recorded.digest) report.issues.push_back(where + ": digest mismatch");
    if (!report.ok()) return report;
  }
  if (!trace.complete) {
    report.issues.push_back("trace records an incomplete run" +
                            (trace.failure ? ": " + trace.failure->message : std::string()));
    return report;
  }
  if (state.pending) report.issues.push_back("trace ends with pending target steps");
  if (digest(state.current) != trace.final_digest) report.issues.push_back("final morphism digest mismatch");
  auto verdict = check_semistable(state.current).verdict;
  if (verdict != Semistability::semistable)
    report.issues.push_back("final morphism is " + to_string(verdict) + ", not semistable");
  return report;
}

}  // namespace ssr
