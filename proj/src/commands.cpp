#include "uiss/commands.hpp"

#include "uiss/error.hpp"
#include "uiss/graph.hpp"
#include "uiss/io.hpp"
#include "uiss/selection.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

namespace uiss::cli {

namespace {

namespace fs = std::filesystem;

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& contents) {
    const std::string path = (dir_ / name).string();
    io::write_file_atomic(path, contents);
    written_.push_back(path);
  }

  std::vector<std::string> finish(const std::string& command, const config::RunConfig& cfg) {
    std::ostringstream m;
    // Loadable as --config for the same command.
    m << "# uiss " << command << '\n' << cfg.to_text();
    m << "# outputs:";
    for (const auto& p : written_) m << ' ' << fs::path(p).filename().string();
    m << '\n';
    write("manifest_" + command + ".txt", m.str());
    return written_;
  }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

const std::string& require_path(const config::RunConfig& cfg, const std::string& key) {
  const std::string& v = cfg.get(key);
  if (v.empty()) throw ValidationError("missing required input '" + key + "'");
  return v;
}

std::string matrix_text(const Matrix& a) {
  std::ostringstream out;
  io::write_matrix(out, a);
  return out.str();
}

std::vector<bool> read_flags(const std::string& path) {
  const auto raw = io::read_labels(path);
  std::vector<bool> flags(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != 0 && raw[i] != 1) throw ParseError(path, i + 1, "flags must be 0 or 1");
    flags[i] = raw[i] == 1;
  }
  return flags;
}

std::string roc_text(const eval::RocCurve& roc) {
  std::ostringstream out;
  out << "threshold\tfpr\ttpr\n";
  for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
    out << io::format_real(roc.thresholds[i]) << '\t' << io::format_real(roc.fpr[i]) << '\t'
        << io::format_real(roc.tpr[i]) << '\n';
  }
  return out.str();
}

// Budget labels as the user typed them, not at full precision.
std::string format_frac(double f) {
  std::ostringstream out;
  out << f;
  return out.str();
}

std::vector<std::size_t> valid_instances(const std::vector<int>& labels) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != synth::kInvalidLabel) out.push_back(i);
  return out;
}

}  // namespace

std::vector<std::string> cmd_synth(const config::RunConfig& cfg) {
  const auto ds = synth::generate(cfg.synth());
  OutputDir out(cfg.get("out"));
  out.write("X.txt", matrix_text(ds.X));
  {
    std::ostringstream e;
    graph::write_edge_list(e, ds.net);
    out.write("edges.txt", e.str());
  }
  {
    std::ostringstream l;
    io::write_labels(l, ds.labels);
    out.write("labels.txt", l.str());
  }
  {
    std::ostringstream g;
    io::write_indices(g, ds.gt_nodes);
    out.write("gt_nodes.txt", g.str());
  }
  {
    std::ostringstream f;
    for (bool b : ds.outlier_flags) f << (b ? 1 : 0) << '\n';
    out.write("outliers.txt", f.str());
  }
  return out.finish("synth", cfg);
}

std::vector<std::string> cmd_fit(const config::RunConfig& cfg) {
  const Matrix x = io::read_matrix(require_path(cfg, "x"));
  const auto net = graph::read_edge_list(require_path(cfg, "edges"), static_cast<std::size_t>(x.cols()));
  const auto lap = graph::build_laplacian(net);
  const auto result = solver::fit(x, lap, cfg.hyper());

  OutputDir out(cfg.get("out"));
  out.write("P.txt", matrix_text(result.P));
  out.write("Q.txt", matrix_text(result.Q));
  std::ostringstream r;
  const auto& rep = result.report;
  r << "converged\t" << (rep.converged ? "true" : "false") << '\n'
    << "outer_iters\t" << rep.outer_iters << '\n'
    << "final_delta_P\t" << io::format_real(rep.final_delta_P) << '\n'
    << "final_delta_Q\t" << io::format_real(rep.final_delta_Q) << '\n'
    << "inner_nonconverged\t" << rep.inner_nonconverged << '\n'
    << "reseeds\t" << rep.reseeds << '\n'
    << "data_scale\t" << io::format_real(rep.data_scale) << '\n'
    << "# iteration\tobjective\n";
  for (std::size_t i = 0; i < rep.objective_trace.size(); ++i) {
    r << i + 1 << '\t' << io::format_real(rep.objective_trace[i]) << '\n';
  }
  out.write("fit_report.tsv", r.str());
  return out.finish("fit", cfg);
}

std::vector<std::string> cmd_rank(const config::RunConfig& cfg) {
  const Matrix p = io::read_matrix(require_path(cfg, "p"));
  const Matrix q = io::read_matrix(require_path(cfg, "q"));
  const auto net = graph::read_edge_list(require_path(cfg, "edges"), static_cast<std::size_t>(p.rows()));
  const auto sel = selection::select(p, q, net, selection::Fraction{cfg.real("feature_frac")},
                                     selection::Fraction{cfg.real("instance_frac")});
  const Vector outl = selection::outlier_scores(sel.instance_scores);

  OutputDir out(cfg.get("out"));
  {
    const auto rank = selection::rank_descending(sel.feature_scores);
    std::vector<std::size_t> pos(rank.size());
    for (std::size_t r = 0; r < rank.size(); ++r) pos[rank[r]] = r + 1;
    std::ostringstream f;
    f << "feature\tscore\trank\tselected\n";
    for (Eigen::Index i = 0; i < sel.feature_scores.size(); ++i) {
      const bool chosen = pos[std::size_t(i)] <= sel.selected_features.size();
      f << i << '\t' << io::format_real(sel.feature_scores[i]) << '\t' << pos[std::size_t(i)] << '\t' << chosen
        << '\n';
    }
    out.write("feature_scores.tsv", f.str());
  }
  {
    const auto rank = selection::rank_descending(sel.instance_scores);
    std::vector<std::size_t> pos(rank.size());
    for (std::size_t r = 0; r < rank.size(); ++r) pos[rank[r]] = r + 1;
    std::ostringstream f;
    f << "instance\tscore\trank\tselected\toutlier_score\n";
    for (Eigen::Index i = 0; i < sel.instance_scores.size(); ++i) {
      const bool chosen = pos[std::size_t(i)] <= sel.selected_instances.size();
      f << i << '\t' << io::format_real(sel.instance_scores[i]) << '\t' << pos[std::size_t(i)] << '\t' << chosen
        << '\t' << io::format_real(outl[i]) << '\n';
    }
    out.write("instance_scores.tsv", f.str());
  }
  {
    std::ostringstream c;
    c << "# one connected component of the selected features per line, largest first\n";
    for (const auto& comp : sel.components) {
      for (std::size_t i = 0; i < comp.size(); ++i) c << (i ? " " : "") << comp[i];
      c << '\n';
    }
    out.write("components.txt", c.str());
  }
  return out.finish("rank", cfg);
}

std::vector<std::string> cmd_eval(const config::RunConfig& cfg) {
  const std::string mode = cfg.get("mode");
  if (mode != "features" && mode != "instances" && mode != "outliers" && mode != "grid") {
    throw ValidationError("unknown eval mode '" + mode + "'");
  }
  const Matrix p = io::read_matrix(require_path(cfg, "p"));
  const Matrix q = io::read_matrix(require_path(cfg, "q"));
  const Vector fscores = selection::feature_scores(p);
  const Vector iscores = selection::instance_scores(q);
  const auto cv = cfg.cv();

  OutputDir out(cfg.get("out"));
  std::ostringstream summary;
  summary << "mode\t" << mode << '\n';

  if (mode == "outliers") {
    const auto flags = read_flags(require_path(cfg, "outliers"));
    if (flags.size() != std::size_t(iscores.size())) throw ValidationError("outlier flags do not match Q columns");
    const auto roc = eval::roc_auc(selection::outlier_scores(iscores), flags);
    out.write("roc_outliers.tsv", roc_text(roc));
    summary << "outlier_auc\t" << io::format_real(roc.auc) << '\n';
    out.write("eval_summary.tsv", summary.str());
    return out.finish("eval", cfg);
  }

  const Matrix x = io::read_matrix(require_path(cfg, "x"));
  const auto labels = io::read_labels(require_path(cfg, "labels"));
  if (labels.size() != std::size_t(x.rows())) throw ValidationError("label count does not match X rows");
  if (p.rows() != x.cols() || q.cols() != x.rows()) throw ValidationError("P/Q do not match X");

  if (mode == "features") {
    const auto instances = valid_instances(labels);
    std::ostringstream t;
    t << "feature_frac\tn_features\tcv_mean\tcv_std\n";
    for (double f : cfg.reals("feature_fracs")) {
      auto feats = selection::select_top(fscores, selection::Fraction{f});
      std::sort(feats.begin(), feats.end());
      const auto rep = eval::cv_accuracy(x, labels, feats, instances, cv);
      t << format_frac(f) << '\t' << feats.size() << '\t' << io::format_real(rep.mean) << '\t'
        << io::format_real(rep.stddev) << '\n';
    }
    out.write("accuracy_features.tsv", t.str());
    if (cfg.has_value("gt")) {
      const auto gt = io::read_indices(cfg.get("gt"));
      std::vector<bool> is_gt(std::size_t(p.rows()), false);
      for (std::size_t v : gt) {
        if (v >= is_gt.size()) throw ValidationError("ground-truth node out of range");
        is_gt[v] = true;
      }
      const auto roc = eval::roc_auc(fscores, is_gt);
      out.write("roc_features.tsv", roc_text(roc));
      summary << "feature_auc\t" << io::format_real(roc.auc) << '\n';
    }
  } else if (mode == "instances") {
    const auto feats = eval::all_indices(std::size_t(x.cols()));
    std::ostringstream t;
    t << "instance_frac\tn_instances\tcv_mean\tcv_std\n";
    for (double f : cfg.reals("instance_fracs")) {
      auto inst = selection::select_top(iscores, selection::Fraction{f});
      std::sort(inst.begin(), inst.end());
      const auto rep = eval::cv_accuracy(x, labels, feats, inst, cv);
      t << format_frac(f) << '\t' << inst.size() << '\t' << io::format_real(rep.mean) << '\t'
        << io::format_real(rep.stddev) << '\n';
    }
    out.write("accuracy_instances.tsv", t.str());
  } else {
    const auto ff = cfg.reals("feature_fracs");
    const auto fi = cfg.reals("instance_fracs");
    const Matrix grid = eval::sweep_grid(x, labels, p, q, ff, fi, cv);
    std::ostringstream t;
    t << "feature_frac";
    for (double f : fi) t << '\t' << format_frac(f);
    t << '\n';
    for (std::size_t i = 0; i < ff.size(); ++i) {
      t << format_frac(ff[i]);
      for (std::size_t j = 0; j < fi.size(); ++j) t << '\t' << io::format_real(grid(long(i), long(j)));
      t << '\n';
    }
    out.write("accuracy_grid.tsv", t.str());
  }
  out.write("eval_summary.tsv", summary.str());
  return out.finish("eval", cfg);
}

std::vector<std::string> cmd_embed(const config::RunConfig& cfg) {
  const Matrix x = io::read_matrix(require_path(cfg, "x"));
  const Matrix p = io::read_matrix(require_path(cfg, "p"));
  const auto e = selection::embed(x, p, static_cast<Eigen::Index>(cfg.count("dim")));

  OutputDir out(cfg.get("out"));
  std::ostringstream t;
  t << "# explained variance ratio:";
  for (Eigen::Index j = 0; j < e.explained_ratio.size(); ++j) t << ' ' << io::format_real(e.explained_ratio[j]);
  t << "\ninstance";
  for (Eigen::Index j = 0; j < e.coords.cols(); ++j) t << "\tpc" << j + 1;
  t << '\n';
  for (Eigen::Index i = 0; i < e.coords.rows(); ++i) {
    t << i;
    for (Eigen::Index j = 0; j < e.coords.cols(); ++j) t << '\t' << io::format_real(e.coords(i, j));
    t << '\n';
  }
  out.write("embedding.tsv", t.str());
  return out.finish("embed", cfg);
}

std::vector<std::string> run_command(const std::string& name, const config::RunConfig& cfg) {
  if (name == "synth") return cmd_synth(cfg);
  if (name == "fit") return cmd_fit(cfg);
  if (name == "rank") return cmd_rank(cfg);
  if (name == "eval") return cmd_eval(cfg);
  if (name == "embed") return cmd_embed(cfg);
  throw ValidationError("unknown command '" + name + "'");
}

}  // namespace uiss::cli
