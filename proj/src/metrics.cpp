#include "panotrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "panotrack/error.hpp"

namespace panotrack {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::All: return "all";
    case Split::InFrame: return "if";
    case Split::OutOfFrame: return "oof";
  }
  return "all";
}

void ThresholdConfig::validate() const {
  if (!(degrees_per_pixel > 0.0)) throw InvalidArgument("degrees_per_pixel must be positive");
  if (multipliers.empty()) throw InvalidArgument("threshold multipliers must not be empty");
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    if (!(multipliers[i] > 0.0)) throw InvalidArgument("threshold multipliers must be positive");
    if (i > 0 && !(multipliers[i] > multipliers[i - 1])) {
      throw InvalidArgument("threshold multipliers must be strictly increasing");
    }
  }
}

std::vector<double> ThresholdConfig::thresholds() const {
  std::vector<double> out;
  out.reserve(multipliers.size());
  for (double m : multipliers) out.push_back(m * degrees_per_pixel);
  return out;
}

void SplitAccumulator::add(const SplitAccumulator& other) {
  if (hits.size() < other.hits.size()) hits.resize(other.hits.size(), 0);
  for (std::size_t i = 0; i < other.hits.size(); ++i) hits[i] += other.hits[i];
  count += other.count;
  distance_sum += other.distance_sum;
}

SplitMetrics SplitMetrics::from(const SplitAccumulator& acc) {
  SplitMetrics m;
  m.count = acc.count;
  if (acc.count == 0) return m;
  const double n = static_cast<double>(acc.count);
  double sum = 0.0;
  for (std::size_t h : acc.hits) {
    m.fractions.push_back(static_cast<double>(h) / n);
    sum += m.fractions.back();
  }
  m.delta_avg = m.fractions.empty() ? 0.0 : sum / static_cast<double>(m.fractions.size());
  m.mean_angular = acc.distance_sum / n;
  return m;
}

namespace {

// Pairs of (pred, gt) tracks sorted by id so that sums do not depend on file order.
std::vector<std::pair<const DirectionTrack*, const DirectionTrack*>> match_tracks(const DirectionTrackSet& pred,
                                                                                 const DirectionTrackSet& gt) {
  std::unordered_map<std::string, const DirectionTrack*> by_id;
  for (const auto& t : pred.tracks) by_id.emplace(t.id, &t);
  std::vector<std::pair<const DirectionTrack*, const DirectionTrack*>> pairs;
  std::vector<std::string> missing;
  for (const auto& g : gt.tracks) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      missing.push_back(g.id);
      continue;
    }
    if (it->second->directions.size() != g.directions.size() || g.in_frame.size() != g.directions.size()) {
      throw InvalidArgument("clip '" + gt.clip_id + "': track '" + g.id + "' has mismatched frame counts");
    }
    pairs.emplace_back(it->second, &g);
  }
  if (pred.tracks.size() != pairs.size() && missing.empty()) {
    std::unordered_map<std::string, int> gt_ids;
    for (const auto& g : gt.tracks) gt_ids.emplace(g.id, 0);
    std::string extra;
    for (const auto& p : pred.tracks) {
      if (!gt_ids.contains(p.id)) extra += (extra.empty() ? "" : ", ") + p.id;
    }
    throw InvalidArgument("clip '" + gt.clip_id + "': predictions for unknown tracks: " + extra);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw InvalidArgument("clip '" + gt.clip_id + "': predictions missing for tracks: " + list);
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.second->id < b.second->id; });
  return pairs;
}

}  // namespace

std::array<SplitAccumulator, 3> accumulate_clip(const DirectionTrackSet& pred, const DirectionTrackSet& gt,
                                                const ThresholdConfig& cfg) {
  cfg.validate();
  const std::vector<double> thresholds = cfg.thresholds();
  std::array<SplitAccumulator, 3> acc;
  for (auto& a : acc) a.hits.assign(thresholds.size(), 0);
  for (const auto& [p, g] : match_tracks(pred, gt)) {
    for (std::size_t t = 0; t < g->directions.size(); ++t) {
      const double d = angular_distance(p->directions[t], g->directions[t]);
      SplitAccumulator& sub = acc[g->in_frame[t] ? 1 : 2];
      ++sub.count;
      sub.distance_sum += d;
      for (std::size_t m = 0; m < thresholds.size(); ++m) {
        if (d < thresholds[m]) ++sub.hits[m];
      }
    }
  }
  // The all-split is the exact sum of its two parts.
  acc[0].add(acc[1]);
  acc[0].add(acc[2]);
  return acc;
}

std::optional<DeltaAccuracy> delta_accuracy(const DirectionTrackSet& pred, const DirectionTrackSet& gt,
                                            const ThresholdConfig& cfg, Split split) {
  const SplitMetrics m = SplitMetrics::from(accumulate_clip(pred, gt, cfg)[static_cast<std::size_t>(split)]);
  if (!m.delta_avg) return std::nullopt;
  return DeltaAccuracy{m.fractions, *m.delta_avg};
}

std::optional<double> mean_angular_distance(const DirectionTrackSet& pred, const DirectionTrackSet& gt, Split split) {
  return SplitMetrics::from(accumulate_clip(pred, gt, ThresholdConfig{})[static_cast<std::size_t>(split)]).mean_angular;
}

namespace {

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.clips = values.size();
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  a.mean = mean;
  a.std = std::sqrt(var / static_cast<double>(values.size()));
  return a;
}

Summary summarize(const std::vector<const ClipMetrics*>& clips, std::size_t n_thresholds) {
  Summary s;
  s.clips = clips.size();
  for (std::size_t si = 0; si < 3; ++si) {
    std::vector<double> deltas;
    std::vector<double> ads;
    std::vector<std::vector<double>> fractions(n_thresholds);
    SplitAccumulator pooled;
    pooled.hits.assign(n_thresholds, 0);
    for (const ClipMetrics* c : clips) {
      const SplitMetrics& m = c->splits[si];
      pooled.add(c->accumulators[si]);
      if (!m.delta_avg) continue;
      deltas.push_back(*m.delta_avg);
      ads.push_back(*m.mean_angular);
      for (std::size_t i = 0; i < n_thresholds; ++i) fractions[i].push_back(m.fractions[i]);
    }
    SplitSummary& out = s.splits[si];
    out.delta_avg = aggregate(deltas);
    out.mean_angular = aggregate(ads);
    for (const auto& f : fractions) out.fractions.push_back(aggregate(f));
    out.pooled = SplitMetrics::from(pooled);
  }
  return s;
}

}  // namespace

EvalReport evaluate(std::span<const DirectionTrackSet> pred, std::span<const DirectionTrackSet> gt,
                    const ThresholdConfig& cfg) {
  cfg.validate();
  std::unordered_map<std::string, const DirectionTrackSet*> pred_by_id;
  for (const auto& p : pred) {
    if (!pred_by_id.emplace(p.clip_id, &p).second) {
      throw InvalidArgument("duplicate predicted clip '" + p.clip_id + "'");
    }
  }
  EvalReport report;
  report.config = cfg;
  std::vector<std::string> missing;
  std::unordered_map<std::string, int> seen;
  for (const auto& g : gt) {
    if (!seen.emplace(g.clip_id, 0).second) throw InvalidArgument("duplicate ground-truth clip '" + g.clip_id + "'");
    auto it = pred_by_id.find(g.clip_id);
    if (it == pred_by_id.end()) {
      missing.push_back(g.clip_id);
      continue;
    }
    ClipMetrics c;
    c.clip_id = g.clip_id;
    c.motion_kind = g.motion_kind;
    c.category = g.category;
    c.accumulators = accumulate_clip(*it->second, g, cfg);
    for (std::size_t si = 0; si < 3; ++si) c.splits[si] = SplitMetrics::from(c.accumulators[si]);
    report.clips.push_back(std::move(c));
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw InvalidArgument("no predictions for clips: " + list);
  }
  if (pred.size() != gt.size()) {
    std::string list;
    for (const auto& p : pred) {
      if (!seen.contains(p.clip_id)) list += (list.empty() ? "" : ", ") + p.clip_id;
    }
    throw InvalidArgument("predictions for unknown clips: " + list);
  }
  std::sort(report.clips.begin(), report.clips.end(),
            [](const ClipMetrics& a, const ClipMetrics& b) { return a.clip_id < b.clip_id; });

  const std::size_t nt = cfg.multipliers.size();
  std::vector<const ClipMetrics*> all;
  std::map<std::string, std::vector<const ClipMetrics*>> motion_groups;
  std::map<std::string, std::vector<const ClipMetrics*>> category_groups;
  for (const auto& c : report.clips) {
    all.push_back(&c);
    motion_groups[c.motion_kind].push_back(&c);
    category_groups[c.category].push_back(&c);
  }
  report.overall = summarize(all, nt);
  for (const auto& [k, v] : motion_groups) report.by_motion.emplace(k, summarize(v, nt));
  for (const auto& [k, v] : category_groups) report.by_category.emplace(k, summarize(v, nt));
  return report;
}

namespace {

std::string cell(const Aggregate& a) {
  if (!a.mean) return "absent";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f ±%.4f", *a.mean, a.std.value_or(0.0));
  return buf;
}

// Pads to `width` display columns; UTF-8 continuation bytes take no column.
std::string pad(const std::string& text, std::size_t width) {
  std::size_t cols = 0;
  for (unsigned char c : text) cols += (c & 0xC0) != 0x80;
  return cols >= width ? text : text + std::string(width - cols, ' ');
}

void table_row(std::ostringstream& os, const std::string& label, const Summary& s) {
  os << pad(label, 20);
  for (std::size_t si = 0; si < 3; ++si) os << " | " << pad(cell(s.splits[si].delta_avg), 18);
  for (std::size_t si = 0; si < 3; ++si) os << " | " << pad(cell(s.splits[si].mean_angular), 18);
  os << '\n';
}

void table_block(std::ostringstream& os, const std::string& title, const std::map<std::string, Summary>& groups) {
  if (groups.empty()) return;
  os << '\n' << title << '\n';
  for (const auto& [k, s] : groups) table_row(os, k.empty() ? "(none)" : k, s);
}

}  // namespace

std::string render_table(const EvalReport& report) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-20s | %-18s | %-18s | %-18s | %-18s | %-18s | %-18s\n", "group", "<d_avg all",
                "<d_avg if", "<d_avg oof", "AD_avg all", "AD_avg if", "AD_avg oof");
  os << buf;
  os << std::string(20 + 6 * 21, '-') << '\n';
  table_row(os, "overall", report.overall);
  table_block(os, "by motion", report.by_motion);
  table_block(os, "by category", report.by_category);
  return os.str();
}

}  // namespace panotrack
