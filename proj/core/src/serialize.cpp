#include "bzsl/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "bzsl/error.hpp"
#include "json.hpp"

namespace bzsl {

using json = nlohmann::ordered_json;

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::pair<std::string_view, E> (&table)[N], const char* what) {
  std::string options;
  for (const auto& [name, value] : table) {
    if (name == s) return value;
    options += (options.empty() ? "" : ", ") + std::string(name);
  }
  throw Error(ErrorKind::usage, std::string("unknown ") + what + " '" + std::string(s) + "' (expected " +
                                    options + ")");
}

constexpr std::pair<std::string_view, Learner> kLearners[] = {
    {"slpp", Learner::slpp}, {"lpp", Learner::lpp}, {"pca", Learner::pca}};
constexpr std::pair<std::string_view, GraphMode> kGraphs[] = {
    {"supervised", GraphMode::supervised}, {"unsupervised", GraphMode::unsupervised}};
constexpr std::pair<std::string_view, PostProc> kPostProcs[] = {
    {"none", PostProc::none}, {"self-train", PostProc::self_train}, {"structured", PostProc::structured}};
constexpr std::pair<std::string_view, Metric> kMetrics[] = {
    {"euclidean", Metric::euclidean}, {"cosine", Metric::cosine}};
constexpr std::pair<std::string_view, SemanticKind> kKinds[] = {
    {"attributes", SemanticKind::attributes},
    {"word-vectors", SemanticKind::word_vectors},
    {"other", SemanticKind::other}};

template <typename E, std::size_t N>
std::string_view name_of(E e, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table)
    if (value == e) return name;
  return "?";
}

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.size(); ++i) data.push_back(m.data()[i]);
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
    throw Error(ErrorKind::parse, "matrix entry count does not match its shape");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = data[static_cast<std::size_t>(i)].get<double>();
  return m;
}

Vector vector_from(const json& j) {
  const Matrix m = matrix_from(j);
  if (m.cols() != 1 && m.size() != 0) throw Error(ErrorKind::parse, "expected a column vector");
  return m.size() == 0 ? Vector() : Vector(m.col(0));
}

json hyper_json(const HyperParams& h) {
  return json{{"alpha", h.alpha}, {"d_y", h.d_y}, {"k_G", h.k_G}, {"eta", h.eta},
              {"k_ST", h.k_ST},   {"gamma", h.gamma}, {"seed", h.seed}};
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::parse, where + ": expected an object");
  const std::set<std::string_view> allowed(keys);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw Error(ErrorKind::parse, where + ": unknown key '" + k + "'");
  }
}

HyperParams hyper_from(const json& j) {
  reject_unknown(j, {"alpha", "d_y", "k_G", "eta", "k_ST", "gamma", "seed"}, "hyper");
  HyperParams h;
  h.alpha = j.value("alpha", h.alpha);
  h.d_y = j.value("d_y", h.d_y);
  h.k_G = j.value("k_G", h.k_G);
  h.eta = j.value("eta", h.eta);
  h.k_ST = j.value("k_ST", h.k_ST);
  h.gamma = j.value("gamma", h.gamma);
  h.seed = j.value("seed", h.seed);
  return h;
}

json options_json(const PipelineOptions& o) {
  json j{{"graph", to_string(o.graph)},
         {"learner", to_string(o.learner)},
         {"kernelized", o.kernelized},
         {"postproc", to_string(o.postproc)},
         {"lsm", {{"max_iters", o.lsm_max_iters}, {"rel_tol", o.lsm_rel_tol}}},
         {"kmeans_max_iters", o.kmeans_max_iters}};
  if (o.semantic_source) j["semantic_source"] = *o.semantic_source;
  return j;
}

json labels_json(const Labels& l) { return json(l); }

json eval_json(const EvalReport& r) {
  json recall = json::array();
  for (const auto& [c, v] : r.per_class_recall) recall.push_back(json{{"class", c}, {"recall", v}});
  json confusion = json::array();
  for (Index i = 0; i < r.confusion.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < r.confusion.cols(); ++k) row.push_back(r.confusion(i, k));
    confusion.push_back(std::move(row));
  }
  return json{{"classes", labels_json(r.classes)},
              {"mean_per_class_accuracy", r.mean_per_class_accuracy},
              {"per_image_accuracy", r.per_image_accuracy},
              {"per_class_recall", std::move(recall)},
              {"predicted_classes", labels_json(r.predicted_classes)},
              {"confusion", std::move(confusion)}};
}

template <typename F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(Learner l) { return name_of(l, kLearners); }
std::string_view to_string(GraphMode g) { return name_of(g, kGraphs); }
std::string_view to_string(PostProc p) { return name_of(p, kPostProcs); }
std::string_view to_string(Metric m) { return name_of(m, kMetrics); }
std::string_view to_string(SemanticKind k) { return name_of(k, kKinds); }
Learner parse_learner(std::string_view s) { return parse_enum(s, kLearners, "learner"); }
GraphMode parse_graph_mode(std::string_view s) { return parse_enum(s, kGraphs, "graph mode"); }
PostProc parse_postproc(std::string_view s) { return parse_enum(s, kPostProcs, "post-processing mode"); }
Metric parse_metric(std::string_view s) { return parse_enum(s, kMetrics, "metric"); }
SemanticKind parse_semantic_kind(std::string_view s) { return parse_enum(s, kKinds, "semantic kind"); }

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  return parsing("config", [&] {
    const json j = json::parse(text);
    reject_unknown(j,
                   {"views", "labels", "semantics", "split", "hyper", "graph", "learner", "kernelized",
                    "postproc", "lsm", "kmeans_max_iters", "semantic_source", "trials", "threads"},
                   "config");
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    ExperimentConfig c;
    for (const auto& v : j.at("views")) c.views.push_back(resolve(v.get<std::string>()));
    if (c.views.empty()) throw Error(ErrorKind::parse, "config: views is empty");
    c.labels = resolve(j.at("labels").get<std::string>());
    for (const auto& s : j.at("semantics")) {
      reject_unknown(s, {"path", "metric", "kind"}, "config.semantics");
      SemanticFile f;
      f.path = resolve(s.at("path").get<std::string>());
      f.metric = parse_metric(s.value("metric", std::string("euclidean")));
      f.kind = parse_semantic_kind(s.value("kind", std::string("attributes")));
      c.semantics.push_back(std::move(f));
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      reject_unknown(s, {"train", "test", "test_fraction", "seed"}, "config.split");
      if (s.contains("train") || s.contains("test")) {
        SplitSpec spec;
        spec.train_classes = s.at("train").get<Labels>();
        spec.test_classes = s.at("test").get<Labels>();
        std::sort(spec.train_classes.begin(), spec.train_classes.end());
        std::sort(spec.test_classes.begin(), spec.test_classes.end());
        c.split.explicit_split = std::move(spec);
      }
      c.split.test_fraction = s.value("test_fraction", c.split.test_fraction);
      c.split.seed = s.value("seed", c.split.seed);
    }
    if (j.contains("hyper")) c.hyper = hyper_from(j.at("hyper"));
    if (j.contains("graph")) c.options.graph = parse_graph_mode(j.at("graph").get<std::string>());
    if (j.contains("learner")) c.options.learner = parse_learner(j.at("learner").get<std::string>());
    c.options.kernelized = j.value("kernelized", false);
    if (j.contains("postproc")) c.options.postproc = parse_postproc(j.at("postproc").get<std::string>());
    if (j.contains("lsm")) {
      const auto& l = j.at("lsm");
      reject_unknown(l, {"max_iters", "rel_tol"}, "config.lsm");
      c.options.lsm_max_iters = l.value("max_iters", c.options.lsm_max_iters);
      c.options.lsm_rel_tol = l.value("rel_tol", c.options.lsm_rel_tol);
    }
    c.options.kmeans_max_iters = j.value("kmeans_max_iters", c.options.kmeans_max_iters);
    if (j.contains("semantic_source")) c.options.semantic_source = j.at("semantic_source").get<std::size_t>();
    c.trials = j.value("trials", c.trials);
    c.threads = j.value("threads", c.threads);
    return c;
  });
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_text_file(path), path.parent_path());
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

std::string hyper_to_json(const HyperParams& h) { return hyper_json(h).dump(2) + "\n"; }

HyperParams hyper_from_json(std::string_view text) {
  return parsing("hyper-parameters", [&] { return hyper_from(json::parse(text)); });
}

std::string model_to_json(const ZslModel& m) {
  const auto& s = m.subspace;
  json views = json::array();
  for (const auto& v : s.kernel_train_features) views.push_back(matrix_json(v));
  json j{{"format", "bidi-zsl-model"},
         {"version", 1},
         {"subspace",
          {{"flavor", s.flavor == Flavor::raw ? "raw" : "kernelized"},
           {"learner", to_string(s.learner)},
           {"alpha", s.hyper.alpha},
           {"d_y", s.hyper.d_y},
           {"k_G", s.hyper.k_G},
           {"projection", matrix_json(s.projection)},
           {"eigenvalues", matrix_json(s.eigenvalues)},
           {"training_mean", matrix_json(s.training_mean)},
           {"kernel_train_features", std::move(views)}}},
         {"landmarks", {{"class_ids", labels_json(m.landmarks.class_ids)}, {"embedding", matrix_json(m.landmarks.embedding)}}},
         {"unseen",
          {{"class_ids", labels_json(m.unseen_class_ids)},
           {"embedding", matrix_json(m.unseen.embedding)},
           {"initial_cost", m.unseen.initial_cost},
           {"final_cost", m.unseen.final_cost},
           {"iterations", m.unseen.iterations},
           {"converged", m.unseen.converged}}}};
  return j.dump() + "\n";
}

ZslModel model_from_json(std::string_view text) {
  return parsing("model", [&] {
    const json j = json::parse(text);
    if (j.value("format", std::string()) != "bidi-zsl-model" || j.value("version", 0) != 1) {
      throw Error(ErrorKind::parse, "model: not a version 1 model document");
    }
    ZslModel m;
    const auto& s = j.at("subspace");
    const auto flavor = s.at("flavor").get<std::string>();
    if (flavor != "raw" && flavor != "kernelized") throw Error(ErrorKind::parse, "model: bad flavor " + flavor);
    m.subspace.flavor = flavor == "raw" ? Flavor::raw : Flavor::kernelized;
    m.subspace.learner = parse_learner(s.at("learner").get<std::string>());
    m.subspace.hyper.alpha = s.at("alpha").get<double>();
    m.subspace.hyper.d_y = s.at("d_y").get<Index>();
    m.subspace.hyper.k_G = s.at("k_G").get<Index>();
    m.subspace.projection = matrix_from(s.at("projection"));
    m.subspace.eigenvalues = vector_from(s.at("eigenvalues"));
    m.subspace.training_mean = vector_from(s.at("training_mean"));
    for (const auto& v : s.at("kernel_train_features")) m.subspace.kernel_train_features.push_back(matrix_from(v));
    m.landmarks.class_ids = j.at("landmarks").at("class_ids").get<Labels>();
    m.landmarks.embedding = matrix_from(j.at("landmarks").at("embedding"));
    const auto& u = j.at("unseen");
    m.unseen_class_ids = u.at("class_ids").get<Labels>();
    m.unseen.embedding = matrix_from(u.at("embedding"));
    m.unseen.initial_cost = u.at("initial_cost").get<double>();
    m.unseen.final_cost = u.at("final_cost").get<double>();
    m.unseen.iterations = u.at("iterations").get<Index>();
    m.unseen.converged = u.at("converged").get<bool>();
    if (m.landmarks.embedding.cols() != static_cast<Index>(m.landmarks.class_ids.size()) ||
        m.unseen.embedding.cols() != static_cast<Index>(m.unseen_class_ids.size()) ||
        m.unseen.embedding.rows() != m.subspace.latent_dim()) {
      throw Error(ErrorKind::shape, "model: embedding shapes disagree with class lists or latent dimension");
    }
    return m;
  });
}

void save_model(const ZslModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_json(model));
}

ZslModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_text_file(path));
  } catch (const Error& e) {
    rethrow_with_context(e, path.string());
  }
}

std::string report_to_json(const RunReport& r) {
  json trials = json::array();
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const auto& tr = r.trials[t];
    trials.push_back(json{{"trial", t},
                          {"lsm_seed", tr.lsm_seed},
                          {"train_classes", labels_json(tr.split.train_classes)},
                          {"test_classes", labels_json(tr.split.test_classes)},
                          {"lsm",
                           {{"initial_cost", tr.lsm.initial_cost},
                            {"final_cost", tr.lsm.final_cost},
                            {"iterations", tr.lsm.iterations},
                            {"converged", tr.lsm.converged}}},
                          {"evaluation", eval_json(tr.report)}});
  }
  json j{{"hyper", hyper_json(r.hyper)},
         {"options", options_json(r.options)},
         {"summary",
          {{"trials", r.trials.size()},
           {"mean_per_class_accuracy", r.mean_accuracy},
           {"standard_error", r.standard_error},
           {"mean_per_image_accuracy", r.mean_per_image_accuracy}}},
         {"trials", std::move(trials)}};
  return j.dump(2) + "\n";
}

namespace {

std::string render_report_text(const json& j) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "trial  per-class acc  per-image acc  lsm cost\n";
  for (const auto& tr : j.at("trials")) {
    const auto& ev = tr.at("evaluation");
    char cost[32];
    std::snprintf(cost, sizeof cost, "%.3e", tr.at("lsm").at("final_cost").get<double>());
    os << std::setw(5) << tr.at("trial").get<std::size_t>() << "  " << std::setw(12)
       << 100.0 * ev.at("mean_per_class_accuracy").get<double>() << "%  " << std::setw(12)
       << 100.0 * ev.at("per_image_accuracy").get<double>() << "%  " << cost << "\n";
  }
  const auto& s = j.at("summary");
  const auto n = s.at("trials").get<std::size_t>();
  os << "mean per-class accuracy: " << 100.0 * s.at("mean_per_class_accuracy").get<double>() << " +- "
     << 100.0 * s.at("standard_error").get<double>() << " (" << n << " trial" << (n == 1 ? "" : "s") << ")\n";
  return os.str();
}

}  // namespace

std::string report_to_text(const RunReport& r) { return render_report_text(json::parse(report_to_json(r))); }

std::string report_text_from_json(std::string_view text) {
  return parsing("report", [&] { return render_report_text(json::parse(text)); });
}

std::string eval_to_json(const EvalReport& report) { return eval_json(report).dump(2) + "\n"; }

std::string search_to_json(const SearchResult& r) {
  json trace = json::array();
  for (const auto& e : r.trace) {
    json entry{{"parameter", e.parameter}, {"point", hyper_json(e.point)}, {"feasible", e.feasible}};
    if (e.feasible) {
      entry["score"] = e.score;
    } else {
      entry["reason"] = e.reason;
    }
    trace.push_back(std::move(entry));
  }
  json j{{"best", hyper_json(r.best)}, {"score", r.score}, {"trace", std::move(trace)}};
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace bzsl
