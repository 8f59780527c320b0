#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>

#include "statnet/dynamics.hpp"
#include "statnet/feedforward.hpp"
#include "statnet/hebbian.hpp"
#include "statnet/io.hpp"
#include "statnet/meanfield.hpp"
#include "statnet/tsp.hpp"

namespace statnet::cli {

using nlohmann::json;

namespace {

// ---- config access ---------------------------------------------------------

double get_real(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
  return x;
}

double get_positive(const json& cfg, const char* key) {
  const double x = get_real(cfg, key);
  if (!(x > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
  return x;
}

double get_nonnegative(const json& cfg, const char* key) {
  const double x = get_real(cfg, key);
  if (x < 0.0) throw ConfigError(std::string("'") + key + "' must be nonnegative");
  return x;
}

std::size_t get_count(const json& cfg, const char* key, std::int64_t lo, std::int64_t hi) {
  const json& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) {
    throw ConfigError(std::string("'") + key + "' must be in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "], got " + std::to_string(x));
  }
  return static_cast<std::size_t>(x);
}

std::string get_string(const json& cfg, const char* key) {
  const json& v = cfg.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::string get_choice(const json& cfg, const char* key, const std::vector<std::string>& allowed) {
  const std::string s = get_string(cfg, key);
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(std::string("'") + key + "' must be one of: " + list);
  }
  return s;
}

std::uint64_t get_seed(const json& cfg) {
  const json& v = cfg.at("seed");
  if (v.is_null()) throw ConfigError("a seed is required (config key 'seed' or --seed)");
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("'seed' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

FixedPointConfig get_fixed_point(const json& cfg) {
  FixedPointConfig fp;
  fp.tol = get_positive(cfg, "tol");
  fp.max_sweeps = get_count(cfg, "max_sweeps", 1, 100000000);
  fp.damping = get_real(cfg, "damping");
  fp.update_order =
      get_choice(cfg, "update_order", {"sequential", "synchronous"}) == "sequential" ? UpdateOrder::sequential
                                                                                     : UpdateOrder::synchronous;
  fp.validate();
  return fp;
}

json fixed_point_defaults() {
  return {{"tol", 1e-8}, {"max_sweeps", 10000}, {"damping", 0.0}, {"update_order", "sequential"}};
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

// ---- bound-check -------------------------------------------------------------

Plan prepare_bound_check(const json& cfg) {
  const auto seed = get_seed(cfg);
  const auto n = get_count(cfg, "n", 1, static_cast<std::int64_t>(kMaxEnumerationSpins));
  const auto instances = get_count(cfg, "instances", 1, 1000000);
  const InverseTemperature beta(get_positive(cfg, "beta"));
  const double coupling = get_nonnegative(cfg, "coupling_scale");
  const double field = get_nonnegative(cfg, "field_scale");
  const auto points = get_count(cfg, "random_points", 0, 1000000);
  const auto fp = get_fixed_point(cfg);

  return [=](Run& run) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> interior(-0.999, 0.999);
    std::vector<std::vector<double>> rows;
    std::vector<double> gaps;
    double min_random_gap = INFINITY;
    std::size_t nonconverged = 0;
    for (std::size_t k = 0; k < instances; ++k) {
      run.step = "instance " + std::to_string(k);
      const auto t = random_couplings(n, coupling, rng);
      const auto h = random_field(n, field, rng);
      const auto exact = brute_force_partition(t, h, beta);
      const auto r = fixed_point_iterate(t, h, beta, Activation::constant(n, 0.0), fp);
      if (!r.converged) ++nonconverged;
      const auto check = verify_bound(t, h, exact, r.activation);
      gaps.push_back(check.gap);
      for (std::size_t p = 0; p < points; ++p) {
        Vector v(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = interior(rng);
        min_random_gap = std::min(min_random_gap, verify_bound(t, h, exact, Activation(v, ActivationKind::bipolar)).gap);
      }
      rows.push_back({static_cast<double>(k), check.f_exact, check.e_mft, check.gap, static_cast<double>(r.sweeps),
                      r.converged ? 1.0 : 0.0});
    }
    run.step = "write gaps";
    write_csv(run.artifact("gaps.csv"), {"instance", "f_exact", "e_mft", "gap", "sweeps", "converged"}, rows);
    const double min_gap = *std::min_element(gaps.begin(), gaps.end());
    run.metrics["min_gap"] = min_gap;
    run.metrics["median_gap"] = median(gaps);
    run.metrics["max_gap"] = *std::max_element(gaps.begin(), gaps.end());
    if (points > 0) run.metrics["min_random_point_gap"] = min_random_gap;
    run.metrics["nonconverged_instances"] = nonconverged;
    if (min_gap < -1e-9 || min_random_gap < -1e-9) {
      run.status = "error";
      run.step = "bound violated";
      throw std::runtime_error("mean-field energy fell below the exact free energy");
    }
    run.status = nonconverged == 0 ? "converged" : "non-converged";
  };
}

// ---- relax ---------------------------------------------------------------------

Plan prepare_relax(const json& cfg) {
  const auto seed = get_seed(cfg);
  const auto n = get_count(cfg, "n", 1, 10000);
  const double beta = InverseTemperature(get_positive(cfg, "beta")).value();
  const auto g = activation_by_name(get_choice(cfg, "activation", {"tanh", "logistic"}), beta);
  const double coupling = get_nonnegative(cfg, "coupling_scale");
  const double field = get_nonnegative(cfg, "field_scale");
  const double input_scale = get_nonnegative(cfg, "input_scale");
  const bool through_field = get_choice(cfg, "input_mode", {"initial", "field"}) == "field";
  const auto fp = get_fixed_point(cfg);
  const auto integ = IntegratorConfig::uniform(n, get_positive(cfg, "dt"), get_positive(cfg, "tau"),
                                               get_count(cfg, "steps", 1, 100000000),
                                               get_count(cfg, "record_every", 1, 100000000));
  integ.validate(n);

  return [=](Run& run) {
    std::mt19937_64 rng(seed);
    const auto t = random_couplings(n, coupling, rng);
    FieldVector h = random_field(n, field, rng);
    const Vector x = random_field(n, input_scale, rng);
    Vector u0 = Vector::Zero(static_cast<Eigen::Index>(n));
    if (through_field) {
      h += x;
    } else {
      u0 = x;
    }
    const auto s0 = NeuronState::from_internal(u0, g);

    run.step = "integrate";
    const auto traj = integrate(s0, t, h, g, integ);
    {
      std::ofstream out(run.artifact("trajectory.csv"), std::ios::binary);
      io::write_trajectory_csv(out, traj);
    }

    run.step = "fixed point";
    const auto r = fixed_point_iterate(t, h, g, s0.v, fp);
    const Vector& terminal = traj.states.back().v;
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < r.v.size(); ++i) rows.push_back({static_cast<double>(i), r.v(i), terminal(i)});
    write_csv(run.artifact("fixed_point.csv"), {"unit", "v_fixed_point", "v_terminal"}, rows);

    double rise = -INFINITY;
    for (std::size_t k = 1; k < traj.energies.size(); ++k) rise = std::max(rise, traj.energies[k] - traj.energies[k - 1]);
    run.metrics["fixed_point_sweeps"] = r.sweeps;
    run.metrics["fixed_point_residual"] = r.residual;
    run.metrics["fixed_point_energy"] = network_energy(t, h, g, r.v);
    run.metrics["final_energy"] = traj.energies.back();
    run.metrics["max_energy_increase"] = traj.energies.size() > 1 ? rise : 0.0;
    run.metrics["terminal_distance"] = (terminal - r.v).lpNorm<Eigen::Infinity>();
    run.status = r.converged ? "converged" : "non-converged";
  };
}

// ---- tsp -------------------------------------------------------------------------

Plan prepare_tsp(const json& cfg) {
  const auto seed = get_seed(cfg);
  const std::string cities = get_string(cfg, "cities");
  const TspInstance inst =
      cities.empty() ? TspInstance::random(get_count(cfg, "n", 3, 12), seed) : io::load_cities_csv(cities);
  if (inst.size() < 3 || inst.size() > 12) throw ConfigError("tsp needs between 3 and 12 cities");
  TspOptions opts;
  opts.schedule.beta0 = get_positive(cfg, "beta0");
  opts.schedule.rate = get_positive(cfg, "rate");
  opts.schedule.stages = get_count(cfg, "stages", 1, 100000);
  opts.schedule.validate();
  opts.softassign.tol = get_positive(cfg, "softassign_tol");
  opts.softassign.max_sweeps = get_count(cfg, "softassign_max_sweeps", 1, 100000000);
  opts.inner_iterations = get_count(cfg, "inner_iterations", 1, 100000);
  opts.inner_tol = get_positive(cfg, "inner_tol");
  opts.self_amplification = get_nonnegative(cfg, "self_amplification");
  opts.noise = get_nonnegative(cfg, "noise");
  opts.saturation = get_nonnegative(cfg, "saturation");
  opts.seed = seed;

  return [=](Run& run) {
    run.step = "anneal";
    const auto r = solve_tsp(inst, opts);
    std::vector<std::vector<double>> stages;
    for (std::size_t k = 0; k < r.stages.size(); ++k) {
      const auto& s = r.stages[k];
      stages.push_back({static_cast<double>(k), s.beta, s.entropy, s.tour_length, s.constraint_error});
    }
    write_csv(run.artifact("stages.csv"), {"stage", "beta", "entropy", "tour_length", "constraint_error"}, stages);
    std::vector<std::vector<double>> tour;
    for (std::size_t a = 0; a < r.tour.size(); ++a) {
      const auto [x, y] = inst.coords()[r.tour[a]];
      tour.push_back({static_cast<double>(a), static_cast<double>(r.tour[a]), x, y});
    }
    write_csv(run.artifact("tour.csv"), {"position", "city", "x", "y"}, tour);
    run.metrics["tour_length"] = r.tour_length;
    run.metrics["cities"] = inst.size();
    run.metrics["stages_run"] = r.stages.size();
    run.metrics["final_entropy"] = r.stages.back().entropy;
    run.metrics["final_constraint_error"] = r.stages.back().constraint_error;
    run.metrics["used_greedy_fallback"] = r.used_greedy_fallback ? 1 : 0;
    run.status = r.converged ? "converged" : "non-converged";
  };
}

// ---- memory ----------------------------------------------------------------------

Plan prepare_memory(const json& cfg) {
  const auto seed = get_seed(cfg);
  const std::string file = get_string(cfg, "patterns");
  const auto n = get_count(cfg, "n", 1, 100000);
  const auto count = get_count(cfg, "count", 1, 100000);
  const PatternSet given = file.empty() ? PatternSet{} : io::load_patterns(file);
  const HebbConfig hebb = HebbConfig::learning(get_nonnegative(cfg, "c"), get_positive(cfg, "tau_t"));
  hebb.validate();
  const double dt = get_positive(cfg, "dt");
  if (dt > hebb.tau_t) throw ConfigError("'dt' must not exceed 'tau_t'");
  const auto sweeps = get_count(cfg, "sweeps", 1, 100000000);
  const double h_weight = get_nonnegative(cfg, "h_weight");
  const auto max_sweeps = get_count(cfg, "max_sweeps", 1, 100000000);
  const auto trials = get_count(cfg, "trials", 1, 100000);
  const json& levels_json = cfg.at("corruption");
  if (!levels_json.is_array() || levels_json.empty()) throw ConfigError("'corruption' must be a nonempty array");
  std::vector<double> levels;
  for (const auto& l : levels_json) {
    if (!l.is_number() || l.get<double>() < 0.0 || l.get<double>() > 1.0) {
      throw ConfigError("'corruption' entries must be fractions in [0, 1]");
    }
    levels.push_back(l.get<double>());
  }
  if (!given.patterns.empty()) given.validate();

  return [=](Run& run) {
    std::mt19937_64 rng(seed);
    PatternSet set = given;
    if (set.patterns.empty()) {
      for (std::size_t p = 0; p < count; ++p) set.patterns.push_back(random_pattern(n, rng));
    }
    const std::size_t width = set.width();
    run.step = "learn";
    const auto t = learn(set, hebb, dt, sweeps);

    std::vector<std::vector<double>> rows;
    std::size_t unconverged = 0;
    double prev_mean = INFINITY;
    bool monotone = true;
    for (double level : levels) {
      run.step = "recall at corruption " + io::format_double(level);
      const auto flips = static_cast<std::size_t>(std::llround(level * static_cast<double>(width)));
      double sum = 0.0;
      double worst = 1.0;
      std::size_t converged = 0;
      std::size_t total = 0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        for (const auto& s : set.patterns) {
          const auto r = recall(t, corrupt(s, flips, rng), h_weight, max_sweeps);
          const double acc = overlap_accuracy(r.state, s);
          sum += acc;
          worst = std::min(worst, acc);
          converged += r.converged ? 1 : 0;
          ++total;
        }
      }
      unconverged += total - converged;
      const double mean = sum / static_cast<double>(total);
      monotone = monotone && mean <= prev_mean;
      prev_mean = mean;
      rows.push_back({level, static_cast<double>(flips), mean, worst,
                      static_cast<double>(converged) / static_cast<double>(total)});
    }
    write_csv(run.artifact("recall.csv"),
              {"corruption", "flips", "mean_accuracy", "min_accuracy", "converged_fraction"}, rows);
    run.metrics["patterns"] = set.patterns.size();
    run.metrics["width"] = width;
    run.metrics["mean_accuracy_first_level"] = rows.front()[2];
    run.metrics["min_accuracy_first_level"] = rows.front()[3];
    run.metrics["mean_accuracy_last_level"] = rows.back()[2];
    run.metrics["accuracy_monotone"] = monotone ? 1 : 0;
    run.metrics["unconverged_recalls"] = unconverged;
    run.status = unconverged == 0 ? "converged" : "non-converged";
  };
}

// ---- train -----------------------------------------------------------------------

TrainingConfig get_training(const json& cfg, std::uint64_t seed) {
  TrainingConfig tc;
  tc.eta = get_positive(cfg, "eta");
  tc.lambda = get_nonnegative(cfg, "lambda");
  tc.batch_mode = get_choice(cfg, "batch_mode", {"full_batch", "stochastic"}) == "full_batch" ? BatchMode::full_batch
                                                                                               : BatchMode::stochastic;
  tc.epochs = get_count(cfg, "epochs", 1, 100000000);
  tc.seed = seed;
  tc.validate();
  return tc;
}

void write_loss_and_network(Run& run, const std::vector<std::vector<double>>& rows,
                            const std::vector<std::string>& header, const LayeredNetwork& net) {
  run.step = "write artifacts";
  write_csv(run.artifact("loss.csv"), header, rows);
  std::ofstream out(run.artifact("network.json"), std::ios::binary);
  out << io::network_to_json(net).dump(2) << '\n';
}

Plan prepare_train(const json& cfg) {
  const auto seed = get_seed(cfg);
  const TrainingBatch batch = io::load_training_csv(get_string(cfg, "data"));
  const json& wj = cfg.at("widths");
  const json& aj = cfg.at("activations");
  if (!wj.is_array() || !aj.is_array()) throw ConfigError("'widths' and 'activations' must be arrays");
  std::vector<std::size_t> widths;
  for (const auto& w : wj) {
    if (!w.is_number_integer() || w.get<std::int64_t>() < 1) throw ConfigError("'widths' must be positive integers");
    widths.push_back(w.get<std::size_t>());
  }
  std::vector<std::string> acts;
  for (const auto& a : aj) {
    if (!a.is_string()) throw ConfigError("'activations' must be strings");
    acts.push_back(a.get<std::string>());
  }
  const double gain = get_positive(cfg, "gain");
  const auto restarts = get_count(cfg, "restarts", 1, 5);
  const double target = get_positive(cfg, "target_loss");
  const TrainingConfig tc = get_training(cfg, seed);
  // Building the first network checks widths, activations and data widths.
  validate_batch(LayeredNetwork::random(widths, acts, seed, gain), batch);

  return [=](Run& run) {
    std::vector<std::vector<double>> rows;
    TrainingResult best{LayeredNetwork::random(widths, acts, seed, gain), {}};
    std::size_t used = 0;
    std::uint64_t seed_used = seed;
    for (std::size_t r = 0; r < restarts; ++r) {
      const std::uint64_t s = seed + r;
      run.step = "train restart " + std::to_string(r);
      TrainingConfig this_cfg = tc;
      this_cfg.seed = s;
      auto res = train(LayeredNetwork::random(widths, acts, s, gain), batch, this_cfg);
      for (std::size_t e = 0; e < res.epoch_loss.size(); ++e) {
        rows.push_back({static_cast<double>(r), static_cast<double>(e + 1), res.epoch_loss[e]});
      }
      ++used;
      if (best.epoch_loss.empty() || res.epoch_loss.back() < best.epoch_loss.back()) {
        best = std::move(res);
        seed_used = s;
      }
      if (best.epoch_loss.back() < target) break;
    }
    write_loss_and_network(run, rows, {"restart", "epoch", "loss"}, best.net);
    run.metrics["final_loss"] = best.epoch_loss.back();
    run.metrics["restarts_used"] = used;
    run.metrics["seed_used"] = seed_used;
    run.status = best.epoch_loss.back() < target ? "converged" : "non-converged";
  };
}

// ---- unroll-train ----------------------------------------------------------------

Plan prepare_unroll_train(const json& cfg) {
  const auto seed = get_seed(cfg);
  const auto n = get_count(cfg, "n", 1, 1000);
  const auto k = get_count(cfg, "steps", 1, 1000);
  const double beta = get_positive(cfg, "beta");
  const auto g = activation_by_name(get_choice(cfg, "activation", {"tanh", "logistic"}), beta);
  const auto integ = IntegratorConfig::uniform(n, get_positive(cfg, "dt"), get_positive(cfg, "tau"), 1);
  integ.validate(n);
  const double coupling = get_nonnegative(cfg, "coupling_scale");
  const double field = get_nonnegative(cfg, "field_scale");
  const auto count = get_count(cfg, "patterns", 1, 100000);
  const double target = get_positive(cfg, "target_loss");
  const TrainingConfig tc = get_training(cfg, seed);

  return [=](Run& run) {
    std::mt19937_64 rng(seed);
    // Teacher dynamics generate the targets; the student starts from other
    // random couplings and a zero field.
    run.step = "generate data";
    const auto t_teacher = random_couplings(n, coupling, rng);
    const auto h_teacher = random_field(n, field, rng);
    const auto t_student = random_couplings(n, coupling, rng);
    const auto student = unroll(t_student, FieldVector::Zero(static_cast<Eigen::Index>(n)), g, integ, k);
    TrainingBatch batch;
    for (std::size_t p = 0; p < count; ++p) {
      auto s = NeuronState::from_internal(random_field(n, 1.0, rng), g);
      batch.inputs.push_back(unroll_input(student, s));
      for (std::size_t i = 0; i < k; ++i) s = euler_step(s, t_teacher, h_teacher, g, integ);
      batch.targets.push_back(s.v);
    }

    run.step = "train";
    const double initial = loss(student, batch, tc.lambda);
    const auto res = train(student, batch, tc);
    std::vector<std::vector<double>> rows;
    for (std::size_t e = 0; e < res.epoch_loss.size(); ++e) rows.push_back({static_cast<double>(e + 1), res.epoch_loss[e]});
    write_loss_and_network(run, rows, {"epoch", "loss"}, res.net);

    const auto teacher_net = unroll(t_teacher, h_teacher, g, integ, k);
    run.metrics["initial_loss"] = initial;
    run.metrics["final_loss"] = res.epoch_loss.back();
    run.metrics["parameter_distance_to_teacher"] =
        (res.net.layers()[0].weights() - teacher_net.layers()[0].weights()).lpNorm<Eigen::Infinity>();
    run.metrics["shared_layers"] = res.net.depth();
    run.status = res.epoch_loss.back() < target ? "converged" : "non-converged";
  };
}

json with_fixed_point(json j) {
  j.update(fixed_point_defaults());
  return j;
}

}  // namespace

std::filesystem::path Run::artifact(const std::string& name) {
  const auto p = out_dir / name;
  artifacts.push_back(p.string());
  return p;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> all = {
      {"bound-check", "Compare the mean-field energy with the exact free energy on random instances",
       with_fixed_point({{"seed", nullptr},
                         {"n", 8},
                         {"instances", 100},
                         {"beta", 1.0},
                         {"coupling_scale", 1.0},
                         {"field_scale", 0.5},
                         {"random_points", 0}}),
       prepare_bound_check},
      {"relax", "Integrate the analog dynamics and solve the fixed-point equations",
       with_fixed_point({{"seed", nullptr},
                         {"n", 6},
                         {"beta", 1.0},
                         {"activation", "tanh"},
                         {"coupling_scale", 1.0},
                         {"field_scale", 0.5},
                         {"input_scale", 1.0},
                         {"input_mode", "initial"},
                         {"dt", 0.01},
                         {"tau", 1.0},
                         {"steps", 5000},
                         {"record_every", 10}}),
       prepare_relax},
      {"tsp", "Anneal a soft-assign tour for a small travelling salesman instance",
       {{"seed", nullptr},
        {"cities", ""},
        {"n", 8},
        {"beta0", 1.0},
        {"rate", 1.05},
        {"stages", 200},
        {"softassign_tol", 1e-5},
        {"softassign_max_sweeps", 20000},
        {"inner_iterations", 20},
        {"inner_tol", 1e-6},
        {"self_amplification", 2.0},
        {"noise", 1e-3},
        {"saturation", 1e-6}},
       prepare_tsp},
      {"memory", "Store patterns with Hebbian learning and measure recall under corruption",
       {{"seed", nullptr},
        {"patterns", ""},
        {"n", 100},
        {"count", 5},
        {"c", 1.0},
        {"tau_t", 1.0},
        {"dt", 0.02},
        {"sweeps", 500},
        {"h_weight", 0.0},
        {"max_sweeps", 100},
        {"corruption", {0.0, 0.05, 0.1, 0.2, 0.3, 0.4}},
        {"trials", 20}},
       prepare_memory},
      {"train", "Train a layered network by backpropagation",
       {{"seed", nullptr},
        {"data", "data/xor.csv"},
        {"widths", {2, 2, 1}},
        {"activations", {"tanh", "tanh"}},
        {"gain", 1.0},
        {"eta", 0.1},
        {"lambda", 0.0},
        {"batch_mode", "full_batch"},
        {"epochs", 5000},
        {"restarts", 5},
        {"target_loss", 0.01}},
       prepare_train},
      {"unroll-train", "Fit an unrolled shared-weight network to trajectories of teacher dynamics",
       {{"seed", nullptr},
        {"n", 4},
        {"steps", 3},
        {"dt", 0.5},
        {"tau", 1.0},
        {"activation", "tanh"},
        {"beta", 1.0},
        {"coupling_scale", 1.0},
        {"field_scale", 0.5},
        {"patterns", 16},
        {"eta", 0.05},
        {"lambda", 0.0},
        {"batch_mode", "full_batch"},
        {"epochs", 5000},
        {"target_loss", 0.02}},
       prepare_unroll_train},
  };
  return all;
}

json merge_config(const json& defaults, const json& user) {
  if (!user.is_object()) throw ConfigError("config must be a JSON object");
  json out = defaults;
  for (const auto& [key, value] : user.items()) {
    if (!defaults.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    out[key] = value;
  }
  return out;
}

void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (!cfg.contains(key)) throw ConfigError("unknown config key '" + key + "' in override");
  json value = json::parse(text, nullptr, false);
  cfg[key] = value.is_discarded() ? json(text) : value;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::logic_error("write_csv: row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << io::format_double(row[c]);
    out << '\n';
  }
}

}  // namespace statnet::cli
