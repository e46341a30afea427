#include "seqeval/catalog.hpp"

#include "seqeval/errors.hpp"
#include "seqeval/engine.hpp"
#include "seqeval/hypervolume.hpp"

#include <algorithm>
#include <set>

namespace seqeval {

using nlohmann::ordered_json;

namespace {

const SequenceSet& require(const ReferenceSet& ref, const std::string& metric) {
  if (!ref) throw ConfigError(metric + " needs a reference set");
  return *ref;
}

MetricSpec make(std::string name, Direction direction, std::vector<std::string> reps, MetricFunction f,
                ordered_json parameters = ordered_json::object()) {
  MetricSpec m;
  m.name = std::move(name);
  m.direction = direction;
  m.required_representations = std::move(reps);
  m.compute = std::move(f);
  m.parameters = std::move(parameters);
  return m;
}

std::string_view kernel_name(KernelKind k) {
  return k == KernelKind::gaussian_rbf ? "rbf" : "rational_quadratic";
}

ordered_json kernel_json(const KernelSpec& k) {
  ordered_json j{{"kind", kernel_name(k.kind)}};
  if (k.sigma) j["sigma"] = *k.sigma; else j["sigma"] = "median";
  if (k.kind == KernelKind::rational_quadratic) j["alpha"] = k.alpha;
  return j;
}

bool compare(double x, const std::string& op, double v) {
  if (op == ">") return x > v;
  if (op == ">=") return x >= v;
  if (op == "<") return x < v;
  if (op == "<=") return x <= v;
  if (op == "==") return x == v;
  if (op == "!=") return x != v;
  throw InvalidInput("unknown comparison '" + op + "'");
}

}  // namespace

MetricSpec novelty_metric(ReferenceSet reference) {
  require(reference, "Novelty");
  return make("Novelty", Direction::maximize, {}, [reference](const MetricContext& ctx) {
    return MetricValue{novelty(ctx.sequences(), *reference)};
  });
}

MetricSpec uniqueness_metric() {
  return make("Uniqueness", Direction::maximize, {},
              [](const MetricContext& ctx) { return MetricValue{uniqueness(ctx.sequences())}; });
}

MetricSpec diversity_metric(DiversityParams params) {
  ordered_json p = ordered_json::object();
  if (params.k) {
    p["k"] = *params.k;
    p["seed"] = params.seed;
  }
  return make("Diversity", Direction::maximize, {},
              [params](const MetricContext& ctx) { return MetricValue{diversity(ctx.sequences(), params)}; }, p);
}

MetricSpec ngram_jaccard_metric(ReferenceSet reference, NgramParams params, Direction direction) {
  require(reference, "N-gram Jaccard");
  return make("N-gram Jaccard", direction, {},
              [reference, params](const MetricContext& ctx) {
                return MetricValue{ngram_jaccard(ctx.sequences(), *reference, params)};
              },
              {{"n", params.n}});
}

MetricSpec fbd_metric(ReferenceSet reference, std::string embedding) {
  require(reference, "FBD");
  return make("FBD", Direction::minimize, {embedding},
              [reference, embedding](const MetricContext& ctx) {
                const auto g = ctx.embeddings(embedding);
                const auto r = ctx.embeddings_of(*reference, embedding);
                if (g.rows() < 2 || r.rows() < 2) {
                  throw InvalidInput("FBD needs at least 2 sequences per set to estimate a covariance");
                }
                if (g.rows() < g.dim() || r.rows() < r.dim()) {
                  ctx.warn("fewer sequences than embedding dimensions (" + std::to_string(g.dim()) +
                           "); covariance estimate is rank-deficient");
                }
                return MetricValue{fbd(g.data, r.data)};
              },
              {{"embedding", embedding}});
}

MetricSpec mmd_metric(ReferenceSet reference, std::string embedding, KernelSpec kernel) {
  require(reference, "MMD");
  return make("MMD", Direction::minimize, {embedding},
              [reference, embedding, kernel](const MetricContext& ctx) {
                return MetricValue{
                    mmd(ctx.embeddings(embedding).data, ctx.embeddings_of(*reference, embedding).data, kernel)};
              },
              {{"embedding", embedding}, {"kernel", kernel_json(kernel)}});
}

MetricSpec precision_metric(ReferenceSet reference, std::string embedding, NeighborhoodParams params) {
  require(reference, "Precision");
  return make("Precision", Direction::maximize, {embedding},
              [reference, embedding, params](const MetricContext& ctx) {
                return MetricValue{improved_precision(ctx.embeddings(embedding).data,
                                                      ctx.embeddings_of(*reference, embedding).data, params)};
              },
              {{"embedding", embedding}, {"k", params.k}});
}

MetricSpec recall_metric(ReferenceSet reference, std::string embedding, NeighborhoodParams params) {
  require(reference, "Recall");
  return make("Recall", Direction::maximize, {embedding},
              [reference, embedding, params](const MetricContext& ctx) {
                return MetricValue{improved_recall(ctx.embeddings(embedding).data,
                                                   ctx.embeddings_of(*reference, embedding).data, params)};
              },
              {{"embedding", embedding}, {"k", params.k}});
}

MetricSpec authenticity_metric(ReferenceSet reference, std::string embedding) {
  require(reference, "Authenticity");
  return make("Authenticity", Direction::maximize, {embedding},
              [reference, embedding](const MetricContext& ctx) {
                return MetricValue{
                    authenticity(ctx.embeddings(embedding).data, ctx.embeddings_of(*reference, embedding).data)};
              },
              {{"embedding", embedding}});
}

MetricSpec vendi_metric(std::string embedding, KernelSpec kernel, double renyi_alpha) {
  return make("Vendi", Direction::maximize, {embedding},
              [embedding, kernel, renyi_alpha](const MetricContext& ctx) {
                return MetricValue{vendi_exact(ctx.embeddings(embedding).data, kernel, renyi_alpha)};
              },
              {{"embedding", embedding}, {"kernel", kernel_json(kernel)}, {"alpha", renyi_alpha}});
}

MetricSpec fkea_vendi_metric(std::string embedding, FkeaParams params) {
  ordered_json p{{"embedding", embedding},
                 {"num_features", params.num_features},
                 {"alpha", params.renyi_alpha},
                 {"seed", params.seed}};
  if (params.sigma) p["sigma"] = *params.sigma; else p["sigma"] = "median";
  return make("FKEA-Vendi", Direction::maximize, {embedding},
              [embedding, params](const MetricContext& ctx) {
                return MetricValue{vendi_fkea(ctx.embeddings(embedding).data, params)};
              },
              p);
}

MetricSpec identity_metric(std::string property, std::string column, Direction direction) {
  MetricSpec m = make("Identity", direction, {property},
                      [property, column](const MetricContext& ctx) {
                        const auto stat = identity_stat(ctx.properties(property).scalar(column));
                        return MetricValue{stat.mean, std::sqrt(stat.variance)};
                      },
                      {{"property", property}, {"column", column}});
  m.arity = Arity::mean_and_deviation;
  return m;
}

MetricSpec threshold_metric(std::string property, std::string column, double threshold, ThresholdSide side,
                            Direction direction) {
  return make("Threshold", direction, {property},
              [=](const MetricContext& ctx) {
                return MetricValue{threshold_fraction(ctx.properties(property).scalar(column), threshold, side)};
              },
              {{"property", property},
               {"column", column},
               {"threshold", threshold},
               {"side", side == ThresholdSide::above ? "above" : "below"}});
}

MetricSpec hit_rate_metric(std::string property, std::string column, std::vector<HitCondition> conditions) {
  if (column.empty() == conditions.empty()) {
    throw ConfigError("Hit-rate needs either a binary column or a list of conditions");
  }
  ordered_json p{{"property", property}};
  if (!column.empty()) p["column"] = column;
  for (const auto& c : conditions) p["conditions"].push_back({{"column", c.column}, {"op", c.op}, {"value", c.value}});
  for (const auto& c : conditions) compare(0.0, c.op, 0.0);  // validates the operator up front
  return make("Hit-rate", Direction::maximize, {property},
              [property, column, conditions](const MetricContext& ctx) {
                const auto table = ctx.properties(property);
                if (!column.empty()) {
                  if (table.column(column).type != ColumnType::binary) {
                    throw InvalidInput("Hit-rate column '" + column + "' is not binary");
                  }
                  return MetricValue{hit_rate(table.scalar(column))};
                }
                Vector hits = Vector::Ones(static_cast<Eigen::Index>(table.rows()));
                for (const auto& c : conditions) {
                  const Vector v = table.scalar(c.column);
                  for (Eigen::Index i = 0; i < v.size(); ++i) {
                    if (!compare(v(i), c.op, c.value)) hits(i) = 0.0;
                  }
                }
                return MetricValue{hit_rate(hits)};
              },
              p);
}

MetricSpec hypervolume_metric(std::string property, std::vector<std::string> columns, HypervolumeMode mode,
                              HypervolumeParams params) {
  ordered_json p{{"property", property},
                 {"columns", columns},
                 {"mode", mode == HypervolumeMode::indicator ? "indicator" : "convex_hull"}};
  if (params.reference_point) {
    p["reference_point"] = std::vector<double>(params.reference_point->data(),
                                               params.reference_point->data() + params.reference_point->size());
  }
  return make("Hypervolume", Direction::maximize, {property},
              [property, columns, mode, params](const MetricContext& ctx) {
                const Matrix pts = ctx.properties(property).stacked(columns);
                if (mode == HypervolumeMode::indicator) return MetricValue{hypervolume_indicator(pts, params)};
                const auto hull = convex_hull_volume(pts);
                if (hull.degenerate) ctx.warn("points are affinely degenerate; hull volume is 0");
                return MetricValue{hull.volume};
              },
              p);
}

MetricSpec conformity_metric(ReferenceSet reference, std::string property, std::vector<std::string> columns,
                             ConformityParams params, std::optional<double> bandwidth) {
  require(reference, "Conformity");
  if (!params.measure) params.measure = kde_log_likelihood(bandwidth);
  ordered_json p{{"property", property}, {"columns", columns}, {"folds", params.folds}, {"seed", params.seed}};
  if (bandwidth) p["bandwidth"] = *bandwidth; else p["bandwidth"] = "scott";
  return make("Conformity", Direction::maximize, {property},
              [reference, property, columns, params](const MetricContext& ctx) {
                const Matrix g = ctx.properties(property).stacked(columns);
                const Matrix r = ctx.properties_of(*reference, property).stacked(columns);
                return MetricValue{conformity_score(g, r, params)};
              },
              p);
}

MetricSpec kl_metric(ReferenceSet reference, std::string property, std::string column, KdeParams params) {
  require(reference, "KL-divergence");
  ordered_json p{{"property", property}, {"column", column}, {"mc_samples", params.mc_samples}, {"seed", params.seed}};
  if (params.bandwidth) p["bandwidth"] = *params.bandwidth; else p["bandwidth"] = "scott";
  return make("KL-divergence", Direction::minimize, {property},
              [reference, property, column, params](const MetricContext& ctx) {
                const auto g = ctx.properties(property);
                const auto r = ctx.properties_of(*reference, property);
                if (g.column(column).type == ColumnType::categorical || g.column(column).type == ColumnType::binary) {
                  return MetricValue{kl_divergence_categorical(g.labels(column), r.labels(column), params.density_floor)};
                }
                const std::vector<std::string> cols{column};
                return MetricValue{kl_divergence(g.stacked(cols), r.stacked(cols), params)};
              },
              p);
}

namespace {

/// Typed access to a metric entry that rejects keys nobody asked for.
class Entry {
 public:
  Entry(const ordered_json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": metric entry must be an object");
  }

  bool has(const char* key) {
    used_.insert(key);
    return j_.contains(key);
  }

  template <class T>
  T get(const char* key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where_ + "." + key + ": required key is missing");
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where_ + "." + key + ": has the wrong type (" + j_.at(key).dump() + ")");
    }
  }

  template <class T>
  T get(const char* key, T fallback) {
    return has(key) ? get<T>(key) : fallback;
  }

  template <class T>
  std::optional<T> optional(const char* key) {
    if (!has(key)) return std::nullopt;
    return get<T>(key);
  }

  [[noreturn]] void fail(const char* key, const std::string& message) const {
    throw ConfigError(where_ + "." + key + ": " + message);
  }

  const ordered_json& raw(const char* key) {
    used_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(where_ + "." + it.key() + ": unknown key");
    }
  }

 private:
  const ordered_json& j_;
  std::string where_;
  std::set<std::string> used_;
};

KernelSpec read_kernel(Entry& e) {
  KernelSpec k;
  const auto kind = e.get<std::string>("kernel", "rbf");
  std::optional<double> sigma;
  if (e.has("sigma")) {
    const auto& raw = e.raw("sigma");
    if (raw.is_string() && raw.get<std::string>() == "median") {
      sigma = std::nullopt;
    } else {
      sigma = e.get<double>("sigma");
      if (!(*sigma > 0.0)) e.fail("sigma", "must be > 0");
    }
  }
  if (kind == "rbf" || kind == "gaussian") {
    k = KernelSpec::rbf(sigma);
  } else if (kind == "rational_quadratic" || kind == "rq") {
    const double alpha = e.get<double>("alpha", 1.0);
    if (!(alpha > 0.0)) e.fail("alpha", "must be > 0");
    k = KernelSpec::rational_quadratic(alpha, e.has("sigma") ? sigma : std::optional<double>(1.0));
  } else {
    e.fail("kernel", "unknown kernel '" + kind + "' (expected rbf or rational_quadratic)");
  }
  return k;
}

std::string read_rep(Entry& e, const char* key, const CatalogContext& ctx) {
  const auto id = e.get<std::string>(key);
  if (!ctx.representations.empty() &&
      std::find(ctx.representations.begin(), ctx.representations.end(), id) == ctx.representations.end()) {
    e.fail(key, "unknown representation '" + id + "'");
  }
  return id;
}

Direction read_direction(Entry& e, Direction fallback) {
  if (!e.has("direction")) return fallback;
  const auto s = e.get<std::string>("direction");
  try {
    return parse_direction(s);
  } catch (const Error&) {
    e.fail("direction", "expected maximize or minimize, got '" + s + "'");
  }
}

std::size_t positive(Entry& e, const char* key, std::size_t fallback) {
  if (!e.has(key)) return fallback;
  const auto v = e.get<long long>(key);
  if (v < 1) e.fail(key, "must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<std::string> metric_names() {
  return {"novelty", "uniqueness", "diversity", "ngram_jaccard", "fbd", "mmd", "precision", "recall",
          "authenticity", "vendi", "fkea_vendi", "identity", "threshold", "hit_rate", "hypervolume",
          "conformity", "kl_divergence"};
}

MetricSpec build_metric(const ordered_json& json, const CatalogContext& context, const std::string& where) {
  Entry e(json, where);
  const auto kind = e.get<std::string>("metric");
  const auto seed = e.get<std::uint64_t>("seed", context.seed);

  ReferenceSet reference = context.reference;
  if (e.has("reference")) {
    const auto name = e.get<std::string>("reference");
    if (!context.find_reference) e.fail("reference", "per-metric references are not available here");
    reference = context.find_reference(name);
    if (!reference) e.fail("reference", "no group or reference named '" + name + "'");
  }
  auto ref = [&]() {
    if (!reference) throw ConfigError(where + ": metric '" + kind + "' needs a reference (set \"reference\")");
    return reference;
  };

  MetricSpec m;
  if (kind == "novelty") {
    m = novelty_metric(ref());
  } else if (kind == "uniqueness") {
    m = uniqueness_metric();
  } else if (kind == "diversity") {
    DiversityParams p;
    if (e.has("k")) p.k = positive(e, "k", 1);
    p.seed = seed;
    m = diversity_metric(p);
  } else if (kind == "ngram_jaccard") {
    NgramParams p;
    p.n = positive(e, "n", 3);
    if (!e.has("direction")) e.fail("direction", "required for ngram_jaccard (maximize or minimize)");
    m = ngram_jaccard_metric(ref(), p, read_direction(e, Direction::maximize));
  } else if (kind == "fbd") {
    m = fbd_metric(ref(), read_rep(e, "embedding", context));
  } else if (kind == "mmd") {
    const auto rep = read_rep(e, "embedding", context);
    m = mmd_metric(ref(), rep, read_kernel(e));
  } else if (kind == "precision" || kind == "recall") {
    const auto rep = read_rep(e, "embedding", context);
    NeighborhoodParams p;
    p.k = positive(e, "k", 3);
    m = kind == "precision" ? precision_metric(ref(), rep, p) : recall_metric(ref(), rep, p);
  } else if (kind == "authenticity") {
    m = authenticity_metric(ref(), read_rep(e, "embedding", context));
  } else if (kind == "vendi") {
    const auto rep = read_rep(e, "embedding", context);
    const auto kernel = read_kernel(e);
    const double alpha = e.get<double>("alpha_renyi", 1.0);
    if (!(alpha > 0.0)) e.fail("alpha_renyi", "must be > 0");
    m = vendi_metric(rep, kernel, alpha);
  } else if (kind == "fkea_vendi") {
    FkeaParams p;
    const auto rep = read_rep(e, "embedding", context);
    p.num_features = positive(e, "num_features", 256);
    p.renyi_alpha = e.get<double>("alpha_renyi", 1.0);
    if (!(p.renyi_alpha > 0.0)) e.fail("alpha_renyi", "must be > 0");
    p.sigma = e.optional<double>("sigma");
    if (p.sigma && !(*p.sigma > 0.0)) e.fail("sigma", "must be > 0");
    p.seed = seed;
    m = fkea_vendi_metric(rep, p);
  } else if (kind == "identity") {
    const auto rep = read_rep(e, "property", context);
    m = identity_metric(rep, e.get<std::string>("column"), read_direction(e, Direction::maximize));
  } else if (kind == "threshold") {
    const auto rep = read_rep(e, "property", context);
    const auto column = e.get<std::string>("column");
    const double c = e.get<double>("threshold");
    const auto side_s = e.get<std::string>("side", "above");
    if (side_s != "above" && side_s != "below") e.fail("side", "expected above or below");
    m = threshold_metric(rep, column, c, side_s == "above" ? ThresholdSide::above : ThresholdSide::below,
                         read_direction(e, Direction::maximize));
  } else if (kind == "hit_rate") {
    const auto rep = read_rep(e, "property", context);
    std::vector<HitCondition> conds;
    if (e.has("conditions")) {
      const auto& raw = e.raw("conditions");
      if (!raw.is_array() || raw.empty()) e.fail("conditions", "must be a non-empty array");
      for (std::size_t i = 0; i < raw.size(); ++i) {
        Entry c(raw[i], where + ".conditions[" + std::to_string(i) + "]");
        HitCondition hc{c.get<std::string>("column"), c.get<std::string>("op"), c.get<double>("value")};
        static const std::set<std::string> ops{">", ">=", "<", "<=", "==", "!="};
        if (!ops.count(hc.op)) c.fail("op", "unknown comparison '" + hc.op + "'");
        c.finish();
        conds.push_back(std::move(hc));
      }
    }
    const auto column = e.get<std::string>("column", "");
    if (column.empty() == conds.empty()) e.fail("column", "give exactly one of 'column' or 'conditions'");
    m = hit_rate_metric(rep, column, conds);
  } else if (kind == "hypervolume") {
    const auto rep = read_rep(e, "property", context);
    const auto columns = e.get<std::vector<std::string>>("columns");
    if (columns.size() < 2) e.fail("columns", "hypervolume needs at least 2 columns");
    const auto mode_s = e.get<std::string>("mode", "indicator");
    HypervolumeMode mode;
    if (mode_s == "indicator") {
      mode = HypervolumeMode::indicator;
    } else if (mode_s == "convex_hull") {
      mode = HypervolumeMode::convex_hull;
    } else {
      e.fail("mode", "expected indicator or convex_hull");
    }
    HypervolumeParams p;
    if (auto rp = e.optional<std::vector<double>>("reference_point")) {
      p.reference_point = Eigen::Map<const Vector>(rp->data(), static_cast<Eigen::Index>(rp->size()));
    }
    m = hypervolume_metric(rep, columns, mode, p);
  } else if (kind == "conformity") {
    const auto rep = read_rep(e, "property", context);
    std::vector<std::string> columns;
    if (e.has("columns")) {
      columns = e.get<std::vector<std::string>>("columns");
    } else {
      columns.push_back(e.get<std::string>("column"));
    }
    ConformityParams p;
    p.folds = positive(e, "folds", 1);
    p.seed = seed;
    const auto bw = e.optional<double>("bandwidth");
    if (bw && !(*bw > 0.0)) e.fail("bandwidth", "must be > 0");
    m = conformity_metric(ref(), rep, columns, p, bw);
  } else if (kind == "kl_divergence") {
    const auto rep = read_rep(e, "property", context);
    KdeParams p;
    p.bandwidth = e.optional<double>("bandwidth");
    if (p.bandwidth && !(*p.bandwidth > 0.0)) e.fail("bandwidth", "must be > 0");
    p.mc_samples = positive(e, "mc_samples", 10000);
    p.density_floor = e.get<double>("epsilon", 1e-12);
    if (!(p.density_floor > 0.0)) e.fail("epsilon", "must be > 0");
    p.seed = seed;
    m = kl_metric(ref(), rep, e.get<std::string>("column"), p);
  } else {
    std::string known;
    for (const auto& n : metric_names()) known += (known.empty() ? "" : ", ") + n;
    e.fail("metric", "unknown metric '" + kind + "' (known: " + known + ")");
  }

  if (kind != "ngram_jaccard" && kind != "identity" && kind != "threshold") {
    m.direction = read_direction(e, m.direction);
  }
  if (e.has("name")) m.name = e.get<std::string>("name");
  if (e.has("fold")) {
    const auto& f = e.raw("fold");
    Entry fe(f, where + ".fold");
    const auto k = fe.get<long long>("K");
    if (k < 2) fe.fail("K", "must be >= 2");
    const auto fold_seed = fe.get<std::uint64_t>("seed", seed);
    fe.finish();
    m = fold_wrap(std::move(m), static_cast<std::size_t>(k), fold_seed);
  }
  e.finish();
  return m;
}

}  // namespace seqeval
