#include "bitmc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bitmc/norms.hpp"

namespace bitmc {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Named child seed: every random stream in a run is a pure function of
// (root seed, repetition, cell, tag).
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t rep, std::uint64_t cell,
                          std::uint64_t tag) {
  std::uint64_t s = splitmix64(root ^ 0xa24baed4963ee407ULL);
  s = splitmix64(s + 0x9e3779b97f4a7c15ULL * (rep + 1));
  s = splitmix64(s ^ (0xbf58476d1ce4e5b9ULL * (cell + 1)));
  return splitmix64(s + tag);
}

void validate(const ExperimentSpec& spec) {
  if (spec.d1 < 1 || spec.d2 < 1)
    throw std::invalid_argument("experiment: dimensions must be positive");
  if (spec.repetitions < 1)
    throw std::invalid_argument("experiment: repetitions must be >= 1");
  if (spec.sample_sizes.empty())
    throw std::invalid_argument("experiment: no sample sizes");
  if (spec.estimators.empty())
    throw std::invalid_argument("experiment: no estimators");
  if (!spec.sampling.with_replacement) {
    const long long cells = static_cast<long long>(spec.d1) * spec.d2;
    for (int n : spec.sample_sizes)
      if (n > cells)
        throw std::invalid_argument(
            "experiment: sample size exceeds d1*d2 for without-replacement sampling");
  }
}

Truth build_truth(const ExperimentSpec& spec, Rng& rng) {
  if (spec.truth_kind == TruthKind::SpectralRankTwo) {
    if (spec.d1 != spec.d2)
      throw std::invalid_argument("spectral truth requires d1 == d2");
    return make_truth_spectral(spec.d1, 1.0, rng);
  }
  return make_truth_uniform_factor(spec.d1, spec.d2, spec.rank, spec.normalization, rng);
}

LinkModel resolve_model(const ModelSpec& ms, std::optional<double> sigma_override,
                        double truth_inf) {
  double scale = ms.scale;
  if (sigma_override) {
    scale = *sigma_override;
  } else if (ms.scale_rule == "half_alpha") {
    scale = 0.5 * truth_inf;
  } else if (ms.scale_rule != "fixed") {
    throw std::invalid_argument("experiment: unknown scale_rule " + ms.scale_rule);
  }
  switch (ms.kind) {
    case LinkKind::Logistic:
      return LinkModel::logistic();
    case LinkKind::Probit:
      return LinkModel::probit(scale);
    case LinkKind::Laplace:
      return LinkModel::laplace(scale);
    default:
      throw std::invalid_argument("experiment: custom models are not configurable");
  }
}

SamplingDistribution build_sampling(const ExperimentSpec& spec) {
  if (spec.sampling.kind == SamplingSpec::Kind::Uniform)
    return uniform_sampling(spec.d1, spec.d2);
  return product_marginals(spec.sampling.row_weights, spec.sampling.col_weights);
}

struct Aggregate {
  double sum = 0.0, sum_sq = 0.0;
  int count = 0;
  void add(double v) {
    if (std::isnan(v)) return;
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count ? sum / count : std::nan(""); }
  double stddev() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum_sq - count * m * m) / (count - 1)));
  }
};

void emit_row_prefix(std::ostream& out, const ResultRow& r, const std::string& rep_label) {
  out << r.experiment << ',' << r.d1 << ',' << r.d2 << ',' << r.rank << ','
      << fmt(r.sigma) << ',' << r.n << ',' << r.estimator << ',' << rep_label << ',';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, bool collect_traces) {
  validate(spec);
  const SamplingDistribution dist = build_sampling(spec);

  std::vector<std::optional<double>> sigmas;
  if (spec.sigma_grid.empty())
    sigmas.push_back(std::nullopt);
  else
    for (double s : spec.sigma_grid) sigmas.push_back(s);

  ExperimentResult result;
  std::ostringstream csv, timings;
  const char* header =
      "experiment,d1,d2,rank,sigma,n,estimator,repetition,seed,"
      "per_dim_frob_sq,rel_frob_sq,weighted_frob_sq,objective,k_used,error\n";
  csv << header;
  timings << "experiment,d1,d2,rank,sigma,n,estimator,repetition,wall_ms\n";

  std::uint64_t cell = 0;
  for (int n : spec.sample_sizes) {
    for (const auto& sigma : sigmas) {
      for (const auto& est : spec.estimators) {
        std::vector<ResultRow> cell_rows;
        for (int rep = 0; rep < spec.repetitions; ++rep) {
          ResultRow row;
          row.experiment = spec.name;
          row.d1 = spec.d1;
          row.d2 = spec.d2;
          row.rank = spec.rank;
          row.n = n;
          row.estimator = est.name;
          row.repetition = rep;
          row.seed = stream_seed(spec.seed, rep, cell, 0);

          const auto t0 = std::chrono::steady_clock::now();
          try {
            // the truth stream depends on the repetition only, so all cells
            // of one repetition see the same target matrix
            Rng truth_rng(stream_seed(spec.seed, rep, 0, 1));
            const Truth truth = build_truth(spec, truth_rng);
            const double truth_inf = inf_norm(truth.M);
            const LinkModel model = resolve_model(spec.model, sigma, truth_inf);
            row.sigma = sigma ? *sigma
                              : (spec.model.kind == LinkKind::Logistic ? 0.0
                                                                       : model.scale);

            Rng index_rng(stream_seed(spec.seed, rep, cell, 2));
            const auto indices =
                spec.sampling.with_replacement
                    ? draw_with_replacement(dist, n, index_rng)
                    : draw_without_replacement(dist, n, index_rng);
            Rng sign_rng(stream_seed(spec.seed, rep, cell, 3));
            const ObservationSet obs =
                generate_observations(truth.M, model, indices, sign_rng);

            EstimatorSpec espec;
            espec.kind = est.kind;
            espec.marginals_source = est.marginals_source;
            espec.alpha = est.alpha > 0.0 ? est.alpha : truth_inf;
            if (est.radius > 0.0)
              espec.radius = est.radius;
            else if (est.kind == EstimatorKind::MaxNorm)
              espec.radius = 1.1 * maxnorm_certificate(truth.natural);
            else
              espec.radius = espec.alpha * std::sqrt(static_cast<double>(spec.rank));
            espec.solver = est.solver;
            espec.solver.seed = stream_seed(spec.seed, rep, cell, 4);
            espec.use_rank_escalation = est.use_rank_escalation;
            espec.k0 = est.k0;
            espec.k_max = est.k_max;

            EstimateResult er = est.kind == EstimatorKind::MaxNorm
                                    ? max_norm_mle(obs, model, espec)
                                    : weighted_trace_mle(obs, model, espec, &dist);

            if (collect_traces) {
              std::ostringstream label;
              label << "n" << n << "_sigma" << fmt(row.sigma) << '_' << est.name
                    << "_rep" << rep;
              result.traces.emplace_back(label.str(), er.trace);
            }

            const RecoveryErrors errs = recovery_errors(er.estimate, truth.M, dist);
            row.per_dim_frob_sq = errs.per_dim_frob_sq;
            row.rel_frob_sq = errs.rel_frob_sq;
            row.weighted_frob_sq = errs.weighted_frob_sq;
            row.objective = er.diag.objective;
            row.k_used = er.diag.k_used;
          } catch (const std::exception& e) {
            row.error = e.what();
            row.per_dim_frob_sq = row.rel_frob_sq = row.weighted_frob_sq =
                row.objective = std::nan("");
          }
          const auto t1 = std::chrono::steady_clock::now();
          row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

          emit_row_prefix(csv, row, std::to_string(rep));
          csv << row.seed << ',' << fmt(row.per_dim_frob_sq) << ','
              << fmt(row.rel_frob_sq) << ',' << fmt(row.weighted_frob_sq) << ','
              << fmt(row.objective) << ',' << row.k_used << ',' << row.error << '\n';
          emit_row_prefix(timings, row, std::to_string(rep));
          timings << fmt(row.wall_ms) << '\n';

          cell_rows.push_back(row);
          result.rows.push_back(std::move(row));
        }

        // aggregate rows: recomputable means/stddevs of the data rows above
        Aggregate per_dim, rel, wfrob, obj, k_used;
        for (const auto& r : cell_rows)
          if (r.error.empty()) {
            per_dim.add(r.per_dim_frob_sq);
            rel.add(r.rel_frob_sq);
            wfrob.add(r.weighted_frob_sq);
            obj.add(r.objective);
            k_used.add(r.k_used);
          }
        ResultRow proto = cell_rows.front();
        proto.sigma = cell_rows.front().sigma;
        emit_row_prefix(csv, proto, "mean");
        csv << ',' << fmt(per_dim.mean()) << ',' << fmt(rel.mean()) << ','
            << fmt(wfrob.mean()) << ',' << fmt(obj.mean()) << ',' << fmt(k_used.mean())
            << ",\n";
        emit_row_prefix(csv, proto, "stddev");
        csv << ',' << fmt(per_dim.stddev()) << ',' << fmt(rel.stddev()) << ','
            << fmt(wfrob.stddev()) << ',' << fmt(obj.stddev()) << ','
            << fmt(k_used.stddev()) << ",\n";

        ++cell;
      }
    }
  }

  result.csv = csv.str();
  result.timings_csv = timings.str();
  return result;
}

namespace {

LinkKind parse_link_kind(const std::string& s) {
  if (s == "logistic") return LinkKind::Logistic;
  if (s == "probit") return LinkKind::Probit;
  if (s == "laplace") return LinkKind::Laplace;
  throw std::invalid_argument("config: unknown link kind " + s);
}

std::string link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Logistic: return "logistic";
    case LinkKind::Probit: return "probit";
    case LinkKind::Laplace: return "laplace";
    default: return "custom";
  }
}

Eigen::VectorXd parse_vector(const json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

SolverConfig parse_solver(const json& j) {
  SolverConfig c;
  c.tau = j.value("tau", 1.0);
  c.max_iters = j.value("max_iters", 500);
  c.tol = j.value("tol", 1e-6);
  c.k = j.value("k", 1);
  c.mode = j.value("mode", std::string("full")) == "stochastic"
               ? SolverMode::Stochastic
               : SolverMode::FullGradient;
  return c;
}

}  // namespace

ExperimentSpec parse_experiment_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentSpec spec;
  spec.name = j.value("name", std::string("experiment"));
  spec.d1 = j.at("d1").get<int>();
  spec.d2 = j.at("d2").get<int>();
  spec.rank = j.value("rank", 2);
  const std::string tk = j.value("truth_kind", std::string("spectral_rank_two"));
  if (tk == "spectral_rank_two")
    spec.truth_kind = TruthKind::SpectralRankTwo;
  else if (tk == "uniform_factor")
    spec.truth_kind = TruthKind::UniformFactor;
  else
    throw std::invalid_argument("config: unknown truth_kind " + tk);
  const std::string nm = j.value("normalization", std::string("frob_per_dim_one"));
  if (nm == "inf_norm_one")
    spec.normalization = TruthNormalization::InfNormOne;
  else if (nm == "frob_per_dim_one")
    spec.normalization = TruthNormalization::FrobPerDimOne;
  else
    throw std::invalid_argument("config: unknown normalization " + nm);

  if (j.contains("model")) {
    const json& jm = j.at("model");
    spec.model.kind = parse_link_kind(jm.value("kind", std::string("logistic")));
    spec.model.scale = jm.value("scale", 1.0);
    spec.model.scale_rule = jm.value("scale_rule", std::string("fixed"));
  }

  if (j.contains("sampling")) {
    const json& js = j.at("sampling");
    const std::string sk = js.value("kind", std::string("uniform"));
    if (sk == "uniform") {
      spec.sampling.kind = SamplingSpec::Kind::Uniform;
    } else if (sk == "product") {
      spec.sampling.kind = SamplingSpec::Kind::Product;
      spec.sampling.row_weights = parse_vector(js.at("row_weights"));
      spec.sampling.col_weights = parse_vector(js.at("col_weights"));
    } else {
      throw std::invalid_argument("config: unknown sampling kind " + sk);
    }
    spec.sampling.with_replacement = js.value("with_replacement", true);
  }

  for (const auto& jn : j.at("sample_sizes")) spec.sample_sizes.push_back(jn.get<int>());
  if (j.contains("sigma_grid"))
    for (const auto& js : j.at("sigma_grid")) spec.sigma_grid.push_back(js.get<double>());

  for (const auto& je : j.at("estimators")) {
    EstimatorSetup e;
    e.name = je.value("name", std::string("max_norm"));
    const std::string ek = je.value("kind", std::string("max_norm"));
    if (ek == "max_norm")
      e.kind = EstimatorKind::MaxNorm;
    else if (ek == "weighted_trace")
      e.kind = EstimatorKind::WeightedTrace;
    else
      throw std::invalid_argument("config: unknown estimator kind " + ek);
    const std::string mg = je.value("marginals", std::string("true"));
    if (mg == "true")
      e.marginals_source = MarginalsSource::True;
    else if (mg == "empirical")
      e.marginals_source = MarginalsSource::Empirical;
    else if (mg == "smoothed")
      e.marginals_source = MarginalsSource::SmoothedEmpirical;
    else
      throw std::invalid_argument("config: unknown marginals source " + mg);
    e.alpha = je.value("alpha", 0.0);
    e.radius = je.value("radius", 0.0);
    if (je.contains("solver")) e.solver = parse_solver(je.at("solver"));
    if (je.contains("rank_escalation")) {
      e.use_rank_escalation = true;
      e.k0 = je.at("rank_escalation").value("k0", 1);
      e.k_max = je.at("rank_escalation").value("k_max", e.solver.k);
    }
    spec.estimators.push_back(std::move(e));
  }

  spec.repetitions = j.value("repetitions", 1);
  spec.seed = j.value("seed", std::uint64_t{0});
  validate(spec);
  return spec;
}

std::string echo_config_json(const ExperimentSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["d1"] = spec.d1;
  j["d2"] = spec.d2;
  j["rank"] = spec.rank;
  j["truth_kind"] = spec.truth_kind == TruthKind::SpectralRankTwo ? "spectral_rank_two"
                                                                  : "uniform_factor";
  j["normalization"] = spec.normalization == TruthNormalization::InfNormOne
                           ? "inf_norm_one"
                           : "frob_per_dim_one";
  j["model"] = {{"kind", link_kind_name(spec.model.kind)},
                {"scale", spec.model.scale},
                {"scale_rule", spec.model.scale_rule}};
  json js;
  js["kind"] = spec.sampling.kind == SamplingSpec::Kind::Uniform ? "uniform" : "product";
  js["with_replacement"] = spec.sampling.with_replacement;
  if (spec.sampling.kind == SamplingSpec::Kind::Product) {
    js["row_weights"] = std::vector<double>(
        spec.sampling.row_weights.data(),
        spec.sampling.row_weights.data() + spec.sampling.row_weights.size());
    js["col_weights"] = std::vector<double>(
        spec.sampling.col_weights.data(),
        spec.sampling.col_weights.data() + spec.sampling.col_weights.size());
  }
  j["sampling"] = js;
  j["sample_sizes"] = spec.sample_sizes;
  if (!spec.sigma_grid.empty()) j["sigma_grid"] = spec.sigma_grid;
  json ests = json::array();
  for (const auto& e : spec.estimators) {
    json je;
    je["name"] = e.name;
    je["kind"] = e.kind == EstimatorKind::MaxNorm ? "max_norm" : "weighted_trace";
    je["marginals"] = e.marginals_source == MarginalsSource::True ? "true"
                      : e.marginals_source == MarginalsSource::Empirical ? "empirical"
                                                                         : "smoothed";
    je["alpha"] = e.alpha;
    je["radius"] = e.radius;
    je["solver"] = {{"tau", e.solver.tau},
                    {"max_iters", e.solver.max_iters},
                    {"tol", e.solver.tol},
                    {"k", e.solver.k},
                    {"mode", e.solver.mode == SolverMode::Stochastic ? "stochastic"
                                                                     : "full"}};
    if (e.use_rank_escalation)
      je["rank_escalation"] = {{"k0", e.k0}, {"k_max", e.k_max}};
    ests.push_back(je);
  }
  j["estimators"] = ests;
  j["repetitions"] = spec.repetitions;
  j["seed"] = spec.seed;
  return j.dump(2);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cellstr;
    while (std::getline(ls, cellstr, ',')) row.push_back(std::stod(cellstr));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("matrix csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix csv: empty");
  Eigen::MatrixXd M(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t jx = 0; jx < rows[i].size(); ++jx) M(i, jx) = rows[i][jx];
  return M;
}

void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& out) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index jx = 0; jx < M.cols(); ++jx) {
      if (jx) out << ',';
      out << fmt(M(i, jx));
    }
    out << '\n';
  }
}

}  // namespace bitmc
