#include "seqeval/metric.hpp"

#include <mutex>

namespace seqeval {

std::string_view to_string(Arity a) {
  return a == Arity::scalar ? "scalar" : "mean-and-deviation";
}

MetricResult MetricResult::from(MetricValue v, std::vector<std::string> warnings) {
  MetricResult r;
  r.value = v.value;
  r.deviation = v.deviation;
  r.per_fold = std::move(v.per_fold);
  r.warnings = std::move(warnings);
  return r;
}

MetricResult MetricResult::failure(std::string message, std::vector<std::string> warnings) {
  MetricResult r;
  r.status = Status::error;
  r.message = std::move(message);
  r.warnings = std::move(warnings);
  return r;
}

namespace {
std::mutex warn_mutex;
}

MetricContext::MetricContext(const SequenceSet& group, const RepresentationResolver& resolver)
    : group_(&group), resolver_(&resolver), warnings_(std::make_shared<std::vector<std::string>>()) {}

EmbeddingMatrix MetricContext::embeddings(std::string_view id) const {
  auto full = resolver_->embeddings(*group_, id);
  return subset_ ? full.select(rows_) : full;
}

PropertyTable MetricContext::properties(std::string_view id) const {
  auto full = resolver_->properties(*group_, id);
  return subset_ ? full.select(rows_) : full;
}

EmbeddingMatrix MetricContext::embeddings_of(const SequenceSet& set, std::string_view id) const {
  return resolver_->embeddings(set, id);
}

PropertyTable MetricContext::properties_of(const SequenceSet& set, std::string_view id) const {
  return resolver_->properties(set, id);
}

MetricContext MetricContext::subset(std::span<const std::size_t> rows) const {
  MetricContext out(*this);
  std::vector<std::size_t> absolute;
  absolute.reserve(rows.size());
  for (auto r : rows) absolute.push_back(subset_ ? rows_.at(r) : r);
  out.subset_ = std::make_shared<const SequenceSet>(group_->select(absolute));
  out.rows_ = std::move(absolute);
  return out;
}

void MetricContext::warn(std::string message) const {
  std::lock_guard lock(warn_mutex);
  warnings_->push_back(std::move(message));
}

std::vector<std::string> MetricContext::warnings() const {
  std::lock_guard lock(warn_mutex);
  return *warnings_;
}

}  // namespace seqeval
