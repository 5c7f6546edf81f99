// Command-line interface for channel comparison: deficiency, exact
// degradation tests, information decompositions, risk gaps, trade-off curves,
// and Monte Carlo objective estimates. Inputs are JSON instance files (see
// io.hpp); results are JSON documents or CSV tables.
//
// Exit codes: 0 success, 2 invalid input, 3 degenerate result (an infinite
// divergence made the requested quantity undefined).

#include <CLI11.hpp>

#include <chandef/bottleneck.hpp>
#include <chandef/decision.hpp>
#include <chandef/estimators.hpp>
#include <chandef/pid.hpp>
#include <chandef/projection.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "io.hpp"

namespace {

using chandef::io::json;
using chandef::io::num;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitDegenerate = 3;

// Inputs shared by the channel-comparison commands: a prior pi on X, the
// channel kappa : X -> Y under study, and the reference decoder d : Z -> Y.
// Either given directly or derived from a three-way joint as pi = P_X,
// kappa = P(Y|X), d = P(Y|Z).
struct ChannelTriple {
  chandef::ProbVector pi;
  chandef::Channel kappa;
  chandef::Channel d;
};

struct TripleArgs {
  std::string joint_path, prior_path, channel_path, decoder_path;

  void attach(CLI::App* cmd) {
    auto* joint = cmd->add_option("--joint", joint_path,
                                  "joint3 instance; uses P_X, P(Y|X), P(Y|Z)");
    auto* prior = cmd->add_option("--prior", prior_path, "prob_vector instance on X");
    auto* chan = cmd->add_option("--channel", channel_path, "channel instance X -> Y");
    auto* dec = cmd->add_option("--decoder", decoder_path, "channel instance Z -> Y");
    joint->excludes(prior)->excludes(chan)->excludes(dec);
    prior->needs(chan)->needs(dec);
    chan->needs(prior);
    dec->needs(prior);
  }

  ChannelTriple resolve() const {
    if (!joint_path.empty()) {
      const auto inst = chandef::io::load_instance(joint_path);
      const auto& j = inst.joint3();
      return {j.marginal(chandef::Axis::X), j.conditional(chandef::Axis::X, chandef::Axis::Y),
              j.conditional(chandef::Axis::Z, chandef::Axis::Y)};
    }
    if (prior_path.empty())
      throw chandef::io::InstanceError("provide --joint or --prior/--channel/--decoder");
    return {chandef::io::load_instance(prior_path).prob_vector(),
            chandef::io::load_instance(channel_path).channel(),
            chandef::io::load_instance(decoder_path).channel()};
  }
};

json pid_terms_to_json(const chandef::PidTerms& t) {
  json j;
  j["kind"] = t.kind == chandef::PidKind::Classical ? "classical" : "deficiency";
  j["unique_x_bits"] = num(t.ui_x);
  j["unique_z_bits"] = num(t.ui_z);
  j["shared_bits"] = num(t.si);
  j["synergy_bits"] = num(t.ci);
  j["degenerate"] = t.degenerate;
  if (t.deficiencies) {
    j["deficiency_x_bits"] = num(t.deficiencies->first.value);
    j["deficiency_z_bits"] = num(t.deficiencies->second.value);
  }
  return j;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      grid.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw chandef::io::InstanceError("--beta-grid entry '" + tok + "' is not a number");
    }
    if (!(grid.back() > 0.0))
      throw chandef::io::InstanceError("--beta-grid entries must be positive");
  }
  if (grid.empty()) throw chandef::io::InstanceError("--beta-grid is empty");
  std::sort(grid.begin(), grid.end());
  return grid;
}

chandef::Schedule parse_schedule(const std::string& spec) {
  if (spec == "oneshot") return chandef::Schedule::oneshot();
  if (spec.rfind("seq:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(spec.substr(4));
    } catch (const std::exception&) {
    }
    if (k == 0) throw chandef::io::InstanceError("--schedule seq:k needs k >= 1");
    return chandef::Schedule::sequential(k);
  }
  throw chandef::io::InstanceError("--schedule must be 'oneshot' or 'seq:k'");
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw chandef::io::InstanceError("cannot write '" + path + "'");
  out << text;
}

std::string curve_csv(const std::vector<chandef::CurvePoint>& pts) {
  std::string out = "beta,rate_bits,sufficiency_bits,objective_bits\n";
  char buf[160];
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g\n", p.beta, p.rate_bits,
                  p.sufficiency_bits, p.objective_bits);
    out += buf;
  }
  return out;
}

json curve_json(const std::vector<chandef::CurvePoint>& pts, bool with_maps) {
  json arr = json::array();
  for (const auto& p : pts) {
    json row;
    row["beta"] = num(p.beta);
    row["rate_bits"] = num(p.rate_bits);
    row["sufficiency_bits"] = num(p.sufficiency_bits);
    row["objective_bits"] = num(p.objective_bits);
    row["converged"] = p.converged;
    if (with_maps) {
      row["encoder"] = chandef::io::channel_to_json(p.encoder);
      row["decoder"] = chandef::io::channel_to_json(p.decoder);
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete channel comparison: deficiency, decompositions, bottleneck curves"};
  app.require_subcommand(1);

  std::string out_path = "-";
  app.add_option("-o,--out", out_path, "output file ('-' for stdout)")
      ->capture_default_str();

  // --- deficiency ---------------------------------------------------------
  auto* c_def = app.add_subcommand("deficiency",
                                   "weighted divergence of a channel from the "
                                   "degradations of a reference decoder");
  TripleArgs def_args;
  def_args.attach(c_def);
  double def_tol = 1e-10;
  bool def_details = false;
  c_def->add_option("--tol", def_tol, "certificate tolerance, bits");
  c_def->add_flag("--details", def_details, "include the encoder and per-input terms");

  // --- blackwell ----------------------------------------------------------
  auto* c_bw = app.add_subcommand("blackwell",
                                  "exact test: is the channel a degradation of "
                                  "the decoder?");
  TripleArgs bw_args;
  bw_args.attach(c_bw);
  double bw_tol = 1e-8;
  c_bw->add_option("--tol", bw_tol, "feasibility tolerance");

  // --- pid ----------------------------------------------------------------
  auto* c_pid = app.add_subcommand("pid",
                                   "four-term information decomposition of a "
                                   "three-way joint");
  std::string pid_joint, pid_kind = "classical";
  c_pid->add_option("--joint", pid_joint, "joint3 instance")->required();
  c_pid->add_option("--kind", pid_kind, "classical | deficiency | both")
      ->check(CLI::IsMember({"classical", "deficiency", "both"}))
      ->capture_default_str();

  // --- riskgap ------------------------------------------------------------
  auto* c_risk = app.add_subcommand("riskgap",
                                    "log-loss Bayes risk, decoder-restricted "
                                    "risk, and their gap");
  TripleArgs risk_args;
  risk_args.attach(c_risk);

  // --- curves -------------------------------------------------------------
  std::string curve_grid_spec, curve_schedule = "oneshot";
  std::size_t curve_zcard = 2, curve_restarts = 5;
  std::uint64_t curve_seed = 0;
  bool curve_csv_out = false, curve_maps = false;
  auto add_curve_options = [&](CLI::App* cmd) {
    cmd->add_option("--beta-grid", curve_grid_spec,
                    "comma-separated positive betas (default: 30 log-spaced in "
                    "[1e-4, 1])");
    cmd->add_option("--z-card", curve_zcard, "bottleneck alphabet size")
        ->capture_default_str();
    cmd->add_option("--restarts", curve_restarts, "random restarts per point")
        ->capture_default_str();
    cmd->add_option("--seed", curve_seed, "restart seed")->capture_default_str();
    cmd->add_flag("--csv", curve_csv_out, "emit CSV instead of JSON");
    cmd->add_flag("--maps", curve_maps, "include encoder/decoder matrices (JSON only)");
  };

  auto* c_ib = app.add_subcommand("ib-curve",
                                  "information bottleneck trade-off curve for a "
                                  "two-way joint");
  std::string ib_joint;
  c_ib->add_option("--joint", ib_joint, "joint2 instance P(X,Y)")->required();
  add_curve_options(c_ib);

  auto* c_db = app.add_subcommand("db-curve",
                                  "deficiency bottleneck trade-off curve");
  TripleArgs db_args;  // decoder unused; allow --prior/--channel or --joint
  std::string db_joint, db_prior, db_channel;
  auto* dbj = c_db->add_option("--joint", db_joint, "joint3 instance; uses P_X, P(Y|X)");
  auto* dbp = c_db->add_option("--prior", db_prior, "prob_vector instance on X");
  auto* dbc = c_db->add_option("--channel", db_channel, "channel instance X -> Y");
  dbj->excludes(dbp)->excludes(dbc);
  dbp->needs(dbc);
  dbc->needs(dbp);
  c_db->add_option("--schedule", curve_schedule, "oneshot | seq:k")
      ->capture_default_str();
  add_curve_options(c_db);

  // --- estimate -----------------------------------------------------------
  auto* c_est = app.add_subcommand("estimate",
                                   "paired Monte Carlo estimates of the "
                                   "bottleneck objectives");
  std::string est_data, est_encoder, est_decoder, est_reference, est_mgrid = "1,3,6,12";
  std::size_t est_batch = 1000;
  double est_beta = 0.0;
  std::uint64_t est_seed = 0;
  bool est_csv = false;
  c_est->add_option("--data", est_data, "JSON array of [x, y] pairs")->required();
  c_est->add_option("--encoder", est_encoder, "channel instance X -> Z")->required();
  c_est->add_option("--decoder", est_decoder, "channel instance Z -> Y")->required();
  c_est->add_option("--reference", est_reference,
                    "prob_vector on Z for the rate penalty (default uniform)");
  c_est->add_option("--m-grid", est_mgrid, "comma-separated sample counts")
      ->capture_default_str();
  c_est->add_option("--batch", est_batch, "evaluation points per estimate")
      ->capture_default_str();
  c_est->add_option("--beta", est_beta, "rate penalty weight")->capture_default_str();
  c_est->add_option("--seed", est_seed, "sampling seed")->capture_default_str();
  c_est->add_flag("--csv", est_csv, "emit CSV instead of JSON");

  // Let -o and other app-level options appear after the subcommand name.
  for (CLI::App* sub : app.get_subcommands(static_cast<bool (*)(const CLI::App*)>(nullptr))) {
    sub->fallthrough();
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_def) {
      auto t = def_args.resolve();
      auto res = chandef::deficiency(t.d, t.kappa, t.pi, def_tol);
      json out;
      out["deficiency_bits"] = num(res.value);
      out["converged"] = res.converged;
      if (def_details) {
        out["encoder"] = chandef::io::channel_to_json(res.encoder);
        json per = json::array();
        for (const auto& p : res.per_input) {
          json e;
          e["x"] = p.x;
          e["divergence_bits"] = num(p.divergence_bits);
          e["projection"] = chandef::io::prob_to_json(p.point);
          per.push_back(std::move(e));
        }
        out["per_input"] = std::move(per);
      }
      chandef::io::write_output(out, out_path);
      return std::isinf(res.value) ? kExitDegenerate : kExitOk;
    }

    if (*c_bw) {
      auto t = bw_args.resolve();
      auto res = chandef::blackwell_sufficient(t.d, t.kappa, bw_tol);
      json out;
      out["sufficient"] = res.sufficient;
      out["max_residual"] = num(res.max_residual);
      if (res.witness_encoder)
        out["witness_encoder"] = chandef::io::channel_to_json(*res.witness_encoder);
      chandef::io::write_output(out, out_path);
      return kExitOk;
    }

    if (*c_pid) {
      const auto inst = chandef::io::load_instance(pid_joint);
      const auto& j = inst.joint3();
      json out;
      bool degenerate = false;
      if (pid_kind == "classical") {
        out = pid_terms_to_json(chandef::classical_decomposition(j));
      } else if (pid_kind == "deficiency") {
        auto t = chandef::deficiency_decomposition(j);
        degenerate = t.degenerate;
        out = pid_terms_to_json(t);
      } else {
        auto cmp = chandef::compare_decompositions(j);
        degenerate = cmp.deficiency_induced.degenerate;
        out["classical"] = pid_terms_to_json(cmp.classical);
        out["deficiency"] = pid_terms_to_json(cmp.deficiency_induced);
        json slack;
        slack["unique_x_bits"] = num(cmp.slack_ui_x);
        slack["unique_z_bits"] = num(cmp.slack_ui_z);
        slack["shared_bits"] = num(cmp.slack_si);
        slack["synergy_bits"] = num(cmp.slack_ci);
        out["slack"] = std::move(slack);
        out["near_equality"] = cmp.near_equality;
      }
      chandef::io::write_output(out, out_path);
      return degenerate ? kExitDegenerate : kExitOk;
    }

    if (*c_risk) {
      auto t = risk_args.resolve();
      auto chk = chandef::verify_risk_gap_identity(t.pi, t.kappa, t.d);
      auto rep = chandef::restricted_bayes_risk(t.pi, t.kappa, t.d);
      json out;
      out["bayes_risk_bits"] = num(rep.bayes_risk);
      out["restricted_risk_bits"] = num(rep.restricted_risk);
      out["gap_bits"] = num(chk.gap);
      out["deficiency_bits"] = num(chk.deficiency);
      out["abs_difference_bits"] = num(chk.abs_difference);
      chandef::io::write_output(out, out_path);
      return std::isinf(rep.restricted_risk) ? kExitDegenerate : kExitOk;
    }

    if (*c_ib || *c_db) {
      chandef::BottleneckConfig cfg;
      cfg.z_cardinality = curve_zcard;
      cfg.restarts = curve_restarts;
      cfg.seed = curve_seed;
      auto grid = curve_grid_spec.empty() ? chandef::default_beta_grid()
                                          : parse_grid(curve_grid_spec);
      std::vector<chandef::CurvePoint> pts;
      if (*c_ib) {
        const auto inst = chandef::io::load_instance(ib_joint);
        pts = chandef::ib_curve(inst.joint2(), grid, cfg);
      } else {
        cfg.schedule = parse_schedule(curve_schedule);
        if (!db_joint.empty()) {
          const auto inst = chandef::io::load_instance(db_joint);
          const auto& j = inst.joint3();
          pts = chandef::db_curve(j.marginal(chandef::Axis::X),
                                  j.conditional(chandef::Axis::X, chandef::Axis::Y), grid,
                                  cfg);
        } else if (!db_prior.empty()) {
          pts = chandef::db_curve(chandef::io::load_instance(db_prior).prob_vector(),
                                  chandef::io::load_instance(db_channel).channel(), grid,
                                  cfg);
        } else {
          throw chandef::io::InstanceError("provide --joint or --prior/--channel");
        }
      }
      if (curve_csv_out)
        write_text(curve_csv(pts), out_path);
      else
        chandef::io::write_output(curve_json(pts, curve_maps), out_path);
      return kExitOk;
    }

    if (*c_est) {
      chandef::EstimatorConfig cfg;
      cfg.batch = est_batch;
      cfg.beta = est_beta;
      cfg.seed = est_seed;
      if (!est_reference.empty())
        cfg.reference = chandef::io::load_instance(est_reference).prob_vector();
      auto data = chandef::io::load_pairs(est_data);
      auto enc = chandef::io::load_instance(est_encoder).channel();
      auto dec = chandef::io::load_instance(est_decoder).channel();
      for (const auto& [x, y] : data) {
        if (x >= enc.input_size() || y >= dec.output_size())
          throw chandef::io::InstanceError("data pair out of range for encoder/decoder");
      }
      std::vector<std::size_t> m_grid;
      for (double v : parse_grid(est_mgrid)) {
        if (v != std::floor(v))
          throw chandef::io::InstanceError("--m-grid entries must be integers");
        m_grid.push_back(static_cast<std::size_t>(v));
      }
      auto rows = chandef::paired_objective_report(data, enc, dec, cfg, m_grid);
      bool degenerate = false;
      if (est_csv) {
        std::string text = "m,mean_vdb,mean_vib,jensen_gap,se_vdb,se_vib,se_gap\n";
        char buf[200];
        for (const auto& r : rows) {
          std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                        r.m, r.mean_vdb, r.mean_vib, r.jensen_gap, r.se_vdb, r.se_vib,
                        r.se_gap);
          text += buf;
          degenerate = degenerate || std::isinf(r.mean_vdb) || std::isinf(r.mean_vib);
        }
        write_text(text, out_path);
      } else {
        json arr = json::array();
        for (const auto& r : rows) {
          json row;
          row["m"] = r.m;
          row["mean_vdb"] = num(r.mean_vdb);
          row["mean_vib"] = num(r.mean_vib);
          row["jensen_gap"] = num(r.jensen_gap);
          row["se_vdb"] = num(r.se_vdb);
          row["se_vib"] = num(r.se_vib);
          row["se_gap"] = num(r.se_gap);
          arr.push_back(std::move(row));
          degenerate = degenerate || std::isinf(r.mean_vdb) || std::isinf(r.mean_vib);
        }
        chandef::io::write_output(arr, out_path);
      }
      return degenerate ? kExitDegenerate : kExitOk;
    }
  } catch (const chandef::io::InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
