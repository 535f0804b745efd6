// Copyright 2026 The IUTQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include "iutq/format.hpp"
#include "iutq/synth.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace iutq::cli
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace
{

std::vector<std::string_view> split_commas(std::string_view text)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) {
      item.remove_prefix(1);
    }
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t' || item.back() == '\r')) {
      item.remove_suffix(1);
    }
    if (!item.empty()) {
      out.push_back(item);
    }
    start = comma + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s)
{
  double v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

template <typename Int>
std::optional<Int> to_int(std::string_view s)
{
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::size_t metric_rank(std::string_view id)
{
  const auto it = std::find(kMetricIds.begin(), kMetricIds.end(), id);
  return static_cast<std::size_t>(it - kMetricIds.begin());
}

void apply_workers(int workers)
{
  if (workers > 0) {
    omp_set_num_threads(workers);
  }
}

std::ofstream open_out(const fs::path & path)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FileError("cannot write " + path.string());
  }
  return out;
}

IutqConfig thresholded(const RunConfig & config)
{
  IutqConfig c = config.iutq;
  if (config.iutq_threshold) {
    c.threshold_combined = *config.iutq_threshold;
    c.threshold_penalized = *config.iutq_threshold;
  }
  return c;
}

}  // namespace

std::string iutq_metric_id(Penalty p)
{
  return p == Penalty::none ? "iutq-co" : "iutq-" + std::string(to_string(p));
}

std::vector<std::string> parse_metric_list(std::string_view text, Penalty iutq_alias)
{
  std::set<std::size_t> ranks;
  for (std::string_view item : split_commas(text)) {
    if (item == "all") {
      for (std::size_t i = 0; i < kMetricIds.size(); ++i) {
        ranks.insert(i);
      }
      continue;
    }
    const std::string id = item == "iutq" ? iutq_metric_id(iutq_alias) : std::string(item);
    const std::size_t rank = metric_rank(id);
    if (rank == kMetricIds.size()) {
      throw UsageError("unknown metric id '" + id + "'");
    }
    ranks.insert(rank);
  }
  if (ranks.empty()) {
    throw UsageError("metric list is empty");
  }
  std::vector<std::string> out;
  for (std::size_t r : ranks) {
    out.emplace_back(kMetricIds[r]);
  }
  return out;
}

std::vector<Penalty> parse_penalty_list(std::string_view text)
{
  std::vector<Penalty> out;
  for (std::string_view item : split_commas(text)) {
    try {
      out.push_back(penalty_from_string(item));
    } catch (const std::invalid_argument &) {
      throw UsageError("unknown penalty '" + std::string(item) + "'");
    }
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text)
{
  std::vector<double> out;
  for (std::string_view item : split_commas(text)) {
    const auto v = to_double(item);
    if (!v) {
      throw UsageError("not a number: '" + std::string(item) + "'");
    }
    out.push_back(*v);
  }
  return out;
}

bool is_iutq_metric(std::string_view metric_id)
{
  return metric_id.substr(0, 5) == "iutq-";
}

Penalty penalty_of(std::string_view metric_id)
{
  if (!is_iutq_metric(metric_id)) {
    throw UsageError("'" + std::string(metric_id) + "' is not an IUTQ metric");
  }
  return penalty_from_string(metric_id.substr(5));
}

double RunConfig::threshold_for(std::string_view metric_id) const
{
  if (iutq_threshold) {
    return *iutq_threshold;
  }
  return penalty_of(metric_id) == Penalty::none ? iutq.threshold_combined : iutq.threshold_penalized;
}

void RunConfig::validate() const
{
  iutq.validate();
  surrogate.validate();
  if (iutq_threshold && !std::isfinite(*iutq_threshold)) {
    throw InvalidSpec("threshold must be finite");
  }
  if (workers < 0) {
    throw InvalidSpec("workers must be non-negative");
  }
  if (load.frame_interval <= 0) {
    throw InvalidSpec("frame interval must be positive");
  }
}

std::vector<ScoreRow> score_recording(
  const LoadedRecording & rec, const std::vector<std::string> & metrics, const RunConfig & config)
{
  const ScenarioTrackset & ts = rec.trackset;
  const IutqConfig iutq_cfg = thresholded(config);

  std::vector<SurrogateMetric> surrogates;
  bool any_iutq = false;
  for (const std::string & m : metrics) {
    if (is_iutq_metric(m)) {
      any_iutq = true;
    } else if (const auto s = surrogate_from_string(m)) {
      surrogates.push_back(*s);
    } else {
      throw UsageError("unknown metric id '" + m + "'");
    }
  }

  std::vector<IutqRecord> iutq;
  if (any_iutq) {
    iutq = score_all(ts, iutq_cfg);
  }
  SurrogateScores surr;
  if (!surrogates.empty()) {
    SurrogateOptions opts;
    opts.metrics = surrogates;
    surr = score_all_surrogates(ts, config.surrogate, opts);
  }

  std::vector<ScoreRow> rows;
  std::size_t k = 0;
  for (const Scene & scene : ts.frames()) {
    for (const AgentState & ego : scene.agents()) {
      std::size_t s = 0;
      for (const std::string & m : metrics) {
        ScoreRow row{rec.recording_id, scene.timestamp(), ego.id, m, std::nullopt, false};
        if (is_iutq_metric(m)) {
          const IutqBreakdown b = with_penalty(iutq[k].breakdown, penalty_of(m), iutq_cfg);
          row.value = b.tq_final;
          row.critical = b.critical;
        } else {
          const SceneMetricValue & v = surr.scene_values[k * surrogates.size() + s++];
          row.value = v.value;
          row.critical = v.critical;
        }
        rows.push_back(std::move(row));
      }
      ++k;
    }
  }
  return rows;
}

void write_score_rows(std::ostream & out, const std::vector<ScoreRow> & rows)
{
  for (const ScoreRow & r : rows) {
    out << r.recording_id << ',' << r.timestamp << ',' << r.ego_id << ',' << r.metric_id << ','
        << format_sig6(r.value) << ',' << (r.critical ? 1 : 0) << '\n';
  }
}

std::vector<ScoreRow> read_score_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open score file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || (!line.empty() && line.back() == '\r' ? line.substr(0, line.size() - 1) : line) != kScoreHeader) {
    throw FormatError(path.string() + ": expected header " + std::string(kScoreHeader));
  }
  std::vector<ScoreRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (f.size() != 6) {
      throw FormatError(where + ": expected 6 fields");
    }
    ScoreRow r;
    r.recording_id = std::string(f[0]);
    const auto t = to_int<TimestampMs>(f[1]);
    const auto ego = to_int<AgentId>(f[2]);
    if (!t || !ego || (f[5] != "0" && f[5] != "1")) {
      throw FormatError(where + ": malformed row");
    }
    r.timestamp = *t;
    r.ego_id = *ego;
    r.metric_id = std::string(f[3]);
    if (!f[4].empty()) {
      r.value = to_double(f[4]);
      if (!r.value) {
        throw FormatError(where + ": malformed value");
      }
    }
    r.critical = f[5] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string> & inputs)
{
  std::vector<fs::path> files;
  for (const std::string & input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto & entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

namespace
{

ordered_json config_json(const RunConfig & c)
{
  ordered_json j;
  j["iutq"] = {
    {"v_ref", c.iutq.v_ref},
    {"a_ref", c.iutq.a_ref},
    {"window_s", c.iutq.window_s},
    {"decel", c.iutq.decel},
    {"reaction_time", c.iutq.reaction_time},
    {"epsilon_speed", c.iutq.epsilon_speed},
    {"penalty", to_string(c.iutq.penalty)},
    {"threshold_combined", c.iutq.threshold_combined},
    {"threshold_penalized", c.iutq.threshold_penalized},
  };
  j["iutq_threshold"] = c.iutq_threshold ? ordered_json(*c.iutq_threshold) : ordered_json();
  const SurrogateConfig & s = c.surrogate;
  j["surrogate"] = {
    {"ttc_threshold", s.ttc_threshold},
    {"pttc_threshold", s.pttc_threshold},
    {"pet_threshold", s.pet_threshold},
    {"et_threshold", s.et_threshold},
    {"gt_threshold", s.gt_threshold},
    {"wttc_threshold", s.wttc_threshold},
    {"dist_threshold", s.dist_threshold},
    {"a_max_wttc", s.a_max_wttc},
    {"pttc_decel", s.pttc_decel ? ordered_json(*s.pttc_decel) : ordered_json()},
    {"conflict_cell", s.conflict_cell},
    {"gt_horizon_s", s.gt_horizon_s},
  };
  j["load"] = {
    {"include_other_agents", c.load.include_other_agents},
    {"frame_interval", c.load.frame_interval},
  };
  return j;
}

RunConfig config_from_json(const nlohmann::json & j)
{
  RunConfig c;
  const auto & q = j.at("iutq");
  c.iutq.v_ref = q.at("v_ref").get<double>();
  c.iutq.a_ref = q.at("a_ref").get<double>();
  c.iutq.window_s = q.at("window_s").get<double>();
  c.iutq.decel = q.at("decel").get<double>();
  c.iutq.reaction_time = q.at("reaction_time").get<double>();
  c.iutq.epsilon_speed = q.at("epsilon_speed").get<double>();
  c.iutq.penalty = penalty_from_string(q.at("penalty").get<std::string>());
  c.iutq.threshold_combined = q.at("threshold_combined").get<double>();
  c.iutq.threshold_penalized = q.at("threshold_penalized").get<double>();
  if (!j.at("iutq_threshold").is_null()) {
    c.iutq_threshold = j.at("iutq_threshold").get<double>();
  }
  const auto & s = j.at("surrogate");
  c.surrogate.ttc_threshold = s.at("ttc_threshold").get<double>();
  c.surrogate.pttc_threshold = s.at("pttc_threshold").get<double>();
  c.surrogate.pet_threshold = s.at("pet_threshold").get<double>();
  c.surrogate.et_threshold = s.at("et_threshold").get<double>();
  c.surrogate.gt_threshold = s.at("gt_threshold").get<double>();
  c.surrogate.wttc_threshold = s.at("wttc_threshold").get<double>();
  c.surrogate.dist_threshold = s.at("dist_threshold").get<double>();
  c.surrogate.a_max_wttc = s.at("a_max_wttc").get<double>();
  if (!s.at("pttc_decel").is_null()) {
    c.surrogate.pttc_decel = s.at("pttc_decel").get<double>();
  }
  c.surrogate.conflict_cell = s.at("conflict_cell").get<double>();
  c.surrogate.gt_horizon_s = s.at("gt_horizon_s").get<double>();
  const auto & l = j.at("load");
  c.load.include_other_agents = l.at("include_other_agents").get<bool>();
  c.load.frame_interval = l.at("frame_interval").get<TimestampMs>();
  return c;
}

}  // namespace

std::string manifest_text(const ScoreOptions & options, const std::vector<fs::path> & files)
{
  ordered_json j;
  j["tool"] = "iutq";
  j["version"] = kToolVersion;
  j["command"] = "score";
  j["inputs"] = options.inputs;
  ordered_json resolved = ordered_json::array();
  for (const fs::path & f : files) {
    resolved.push_back(f.string());
  }
  j["files"] = std::move(resolved);
  j["metrics"] = options.metrics;
  j["out_dir"] = options.out_dir.string();
  j["workers"] = options.config.workers;
  j["strict"] = options.strict;
  j["config"] = config_json(options.config);
  return j.dump(2) + "\n";
}

ScoreOptions read_manifest(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open manifest " + path.string());
  }
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    ScoreOptions o;
    o.inputs = j.at("inputs").get<std::vector<std::string>>();
    o.metrics = j.at("metrics").get<std::vector<std::string>>();
    o.out_dir = j.at("out_dir").get<std::string>();
    o.strict = j.at("strict").get<bool>();
    o.config = config_from_json(j.at("config"));
    o.config.workers = j.at("workers").get<int>();
    return o;
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

int cmd_score(const ScoreOptions & options, std::ostream & log)
{
  options.config.validate();
  const std::vector<fs::path> files = expand_inputs(options.inputs);
  if (files.empty()) {
    log << "error: no recordings found in the given inputs\n";
    return kFailure;
  }
  apply_workers(options.config.workers);

  const auto n = static_cast<std::ptrdiff_t>(files.size());
  std::vector<std::vector<ScoreRow>> results(files.size());
  std::vector<std::string> errors(files.size());
  std::vector<std::size_t> dropped(files.size(), 0);
  auto run_one = [&](std::ptrdiff_t i) {
    try {
      const LoadedRecording rec = load_trackfile(files[i], options.config.load);
      dropped[i] = rec.report.rows_dropped;
      results[i] = score_recording(rec, options.metrics, options.config);
    } catch (const std::exception & e) {
      errors[i] = e.what();
    }
  };
  // Whole recordings per worker when there are several; otherwise the
  // frame-level parallelism inside the scorers takes over.
  if (n > 1) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      run_one(i);
    }
  } else {
    run_one(0);
  }

  std::size_t failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (dropped[i] > 0) {
      log << "warning: " << files[i].string() << ": dropped " << dropped[i] << " malformed row(s)\n";
    }
    if (!errors[i].empty()) {
      ++failed;
      log << "error: " << files[i].string() << ": " << errors[i] << '\n';
      if (options.strict) {
        log << "error: aborting (--strict)\n";
        return kFailure;
      }
    }
  }
  if (failed == files.size()) {
    log << "error: no recordings could be scored\n";
    return kFailure;
  }

  std::size_t row_count = 0;
  {
    std::ofstream out = open_out(options.out_dir / "scores.csv");
    out << kScoreHeader << '\n';
    for (const auto & rows : results) {
      write_score_rows(out, rows);
      row_count += rows.size();
    }
  }
  open_out(options.out_dir / "manifest.json") << manifest_text(options, files);
  log << "scored " << (files.size() - failed) << " recording(s), " << row_count << " row(s) -> "
      << (options.out_dir / "scores.csv").string() << '\n';
  return failed == 0 ? kOk : kFailure;
}

namespace
{

std::vector<std::pair<std::string, ConfusionCounts>> read_counts_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open counts file " + path.string());
  }
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "metric_id,tp,tn,fp,fn") {
    throw FormatError(path.string() + ": expected header metric_id,tp,tn,fp,fn");
  }
  std::vector<std::pair<std::string, ConfusionCounts>> out;
  while (std::getline(in, line)) {
    const auto f = split_commas(line);
    if (f.empty()) {
      continue;
    }
    if (f.size() != 5) {
      throw FormatError(path.string() + ": expected 5 fields in '" + line + "'");
    }
    ConfusionCounts c;
    std::uint64_t * slots[4] = {&c.tp, &c.tn, &c.fp, &c.fn};
    for (int k = 0; k < 4; ++k) {
      const auto v = to_int<std::uint64_t>(f[k + 1]);
      if (!v) {
        throw FormatError(path.string() + ": bad count in '" + line + "'");
      }
      *slots[k] = *v;
    }
    out.emplace_back(std::string(f[0]), c);
  }
  return out;
}

}  // namespace

int cmd_evaluate(const EvaluateOptions & options, std::ostream & log)
{
  TableReport report;
  if (options.counts) {
    report = table_report(read_counts_file(*options.counts));
  } else {
    if (!options.scores || !options.labels) {
      throw UsageError("evaluate needs --scores and --labels, or --counts");
    }
    const auto rows = read_score_file(*options.scores);
    const LabelTable labels = load_labels(*options.labels);
    std::vector<std::string> ids;
    std::map<std::string, FlagTable> flags;
    for (const ScoreRow & r : rows) {
      auto [it, inserted] = flags.try_emplace(r.metric_id);
      if (inserted) {
        ids.push_back(r.metric_id);
      }
      it->second[LabelKey{r.recording_id, r.ego_id, r.timestamp}] = r.critical;
    }
    if (ids.empty()) {
      throw FormatError(options.scores->string() + ": no score rows");
    }
    std::sort(ids.begin(), ids.end(), [](const std::string & a, const std::string & b) {
      return metric_rank(a) < metric_rank(b) || (metric_rank(a) == metric_rank(b) && a < b);
    });
    std::vector<FlagTable> tables;
    for (const std::string & id : ids) {
      tables.push_back(std::move(flags[id]));
    }
    report = table_report(ids, tables, labels);
  }
  open_out(options.out_dir / "report.csv") << to_csv(report);
  open_out(options.out_dir / "report.json") << to_json_text(report);
  log << "wrote " << (options.out_dir / "report.csv").string() << " and report.json\n";
  return kOk;
}

std::string timeseries_text(const TimeseriesOptions & options)
{
  options.config.validate();
  const LoadedRecording rec = load_trackfile(options.input, options.config.load);
  const ScenarioTrackset & ts = rec.trackset;
  if (ts.track(options.ego_id).empty()) {
    throw MissingAgent("agent " + std::to_string(options.ego_id) + " is not in " + rec.recording_id);
  }
  if (options.adversary_id && ts.track(*options.adversary_id).empty()) {
    throw MissingAgent("agent " + std::to_string(*options.adversary_id) + " is not in " + rec.recording_id);
  }
  if (options.adversary_id && *options.adversary_id == options.ego_id) {
    throw UsageError("adversary must differ from the ego");
  }
  apply_workers(options.config.workers);

  const IutqConfig iutq_cfg = thresholded(options.config);
  std::vector<SurrogateMetric> surrogates;
  for (const std::string & m : options.metrics) {
    if (!is_iutq_metric(m)) {
      surrogates.push_back(*surrogate_from_string(m));
    }
  }
  std::map<std::pair<TimestampMs, SurrogateMetric>, std::optional<double>> values;
  if (!surrogates.empty()) {
    SurrogateOptions opts;
    opts.metrics = surrogates;
    opts.include_pairs = options.adversary_id.has_value();
    const SurrogateScores scores = score_all_surrogates(ts, options.config.surrogate, opts);
    if (options.adversary_id) {
      for (const PairMetricValue & p : scores.pairs) {
        if (p.ego_id == options.ego_id && p.adversary_id == *options.adversary_id) {
          values[{p.timestamp, p.metric}] = p.value;
        }
      }
    } else {
      for (const SceneMetricValue & v : scores.scene_values) {
        if (v.ego_id == options.ego_id) {
          values[{v.timestamp, v.metric}] = v.value;
        }
      }
    }
  }

  std::ostringstream out;
  out << "timestamp_ms";
  for (const std::string & m : options.metrics) {
    out << ',' << m;
  }
  out << '\n';
  for (const Scene & scene : ts.frames()) {
    if (!scene.find(options.ego_id) || (options.adversary_id && !scene.find(*options.adversary_id))) {
      continue;
    }
    IutqBreakdown breakdown;
    bool have_breakdown = false;
    out << scene.timestamp();
    for (const std::string & m : options.metrics) {
      out << ',';
      if (is_iutq_metric(m)) {
        if (!have_breakdown) {
          breakdown = score_scene(ts, scene, options.ego_id, iutq_cfg);
          have_breakdown = true;
        }
        out << format_sig6(with_penalty(breakdown, penalty_of(m), iutq_cfg).tq_final);
      } else {
        const auto it = values.find({scene.timestamp(), *surrogate_from_string(m)});
        out << format_sig6(it == values.end() ? std::nullopt : it->second);
      }
    }
    out << '\n';
  }
  return out.str();
}

int cmd_timeseries(const TimeseriesOptions & options, std::ostream & log)
{
  const std::string text = timeseries_text(options);
  open_out(options.out_file) << text;
  log << "wrote " << options.out_file.string() << '\n';
  return kOk;
}

std::vector<SweepRow> sweep(const SweepOptions & options)
{
  if (options.thresholds.empty() == options.penalties.empty()) {
    throw UsageError("sweep needs a non-empty threshold grid or a non-empty penalty set, not both");
  }
  if (metric_rank(options.metric) == kMetricIds.size()) {
    throw UsageError("unknown metric id '" + options.metric + "'");
  }
  if (!options.penalties.empty() && !is_iutq_metric(options.metric)) {
    throw UsageError("a penalty sweep needs an IUTQ metric");
  }
  options.config.validate();
  apply_workers(options.config.workers);

  const LabelTable labels = load_labels(options.labels);
  const auto files = expand_inputs(options.inputs);
  if (files.empty()) {
    throw UsageError("no recordings given");
  }
  std::vector<LoadedRecording> recordings;
  for (const fs::path & f : files) {
    recordings.push_back(load_trackfile(f, options.config.load));
  }

  std::vector<SweepRow> out;
  auto finish = [&](SweepRow row, const FlagTable & flags) {
    row.counts = confusion(flags, labels);
    row.stats = statistics(row.counts);
    out.push_back(std::move(row));
  };

  if (!options.thresholds.empty()) {
    std::vector<ScoreRow> rows;
    for (const LoadedRecording & rec : recordings) {
      auto part = score_recording(rec, {options.metric}, options.config);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    const bool iutq = is_iutq_metric(options.metric);
    for (double threshold : options.thresholds) {
      FlagTable flags;
      for (const ScoreRow & r : rows) {
        const bool critical = r.value && (iutq ? *r.value >= threshold : *r.value < threshold);
        flags[{r.recording_id, r.ego_id, r.timestamp}] = critical;
      }
      SweepRow row;
      row.metric_id = options.metric;
      row.penalty = iutq ? std::string(to_string(penalty_of(options.metric))) : "";
      row.threshold = threshold;
      finish(std::move(row), flags);
    }
    return out;
  }

  const IutqConfig cfg = thresholded(options.config);
  std::vector<std::pair<const LoadedRecording *, std::vector<IutqRecord>>> scored;
  for (const LoadedRecording & rec : recordings) {
    scored.emplace_back(&rec, score_all(rec.trackset, cfg));
  }
  for (Penalty p : options.penalties) {
    FlagTable flags;
    for (const auto & [rec, records] : scored) {
      for (const IutqRecord & r : records) {
        flags[{rec->recording_id, r.ego_id, r.timestamp}] = with_penalty(r.breakdown, p, cfg).critical;
      }
    }
    SweepRow row;
    row.metric_id = iutq_metric_id(p);
    row.penalty = std::string(to_string(p));
    row.threshold = p == Penalty::none ? cfg.threshold_combined : cfg.threshold_penalized;
    finish(std::move(row), flags);
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow> & rows)
{
  std::ostringstream out;
  out << "metric_id,penalty,threshold";
  for (std::size_t r = 0; r < kStatRowCount; ++r) {
    out << ',' << to_string(static_cast<StatRow>(r));
  }
  out << '\n';
  for (const SweepRow & row : rows) {
    out << row.metric_id << ',' << row.penalty << ',' << format_sig6(row.threshold);
    for (std::size_t r = 0; r < kStatRowCount; ++r) {
      out << ',' << format_sig6(row_value(static_cast<StatRow>(r), row.counts, row.stats));
    }
    out << '\n';
  }
  return out.str();
}

int cmd_sweep(const SweepOptions & options, std::ostream & log)
{
  const auto rows = sweep(options);
  open_out(options.out_file) << sweep_csv(rows);
  log << "wrote " << rows.size() << " sweep row(s) to " << options.out_file.string() << '\n';
  return kOk;
}

int cmd_synth(const SynthOptions & options, std::ostream & log)
{
  ScenarioTrackset ts;
  if (options.kind == "scenario") {
    synth::ScenarioSpec spec;
    spec.scene.seed = options.seed;
    spec.scene.n_agents = options.agents;
    spec.scene.footprints = options.footprints;
    static const std::map<std::string, synth::SpeedLaw> speed_laws{
      {"uniform", synth::SpeedLaw::uniform},
      {"bimodal", synth::SpeedLaw::bimodal},
      {"all_standing", synth::SpeedLaw::all_standing},
      {"one_fast", synth::SpeedLaw::one_fast}};
    static const std::map<std::string, synth::SpatialLaw> spatial_laws{
      {"grid", synth::SpatialLaw::grid},
      {"corridor", synth::SpatialLaw::corridor},
      {"crossing", synth::SpatialLaw::crossing}};
    const auto sl = speed_laws.find(options.speed_law);
    const auto pl = spatial_laws.find(options.spatial_law);
    if (sl == speed_laws.end() || pl == spatial_laws.end()) {
      throw UsageError("unknown speed or spatial law");
    }
    spec.scene.speed_law = sl->second;
    spec.scene.spatial_law = pl->second;
    spec.n_frames = options.frames;
    ts = synth::build_scenario(spec);
  } else if (options.kind == "crossing") {
    synth::CrossingSpec spec;
    spec.speed_first = options.speed;
    spec.speed_second = options.speed;
    spec.offset_s = options.offset_s;
    spec.footprints = options.footprints;
    spec.standing_bystander = options.bystander;
    ts = synth::build_crossing_scenario(spec);
  } else if (options.kind == "passing") {
    const double duration = static_cast<double>(std::max<std::size_t>(options.frames, 2) - 1) / 10.0;
    ts = synth::build_passing_scenario(options.speed, options.lateral_offset, duration, options.footprints);
  } else {
    throw UsageError("unknown synth kind '" + options.kind + "'");
  }
  if (options.out_file.has_parent_path()) {
    fs::create_directories(options.out_file.parent_path());
  }
  synth::write_fixture(options.out_file, ts);
  log << "wrote " << ts.frames().size() << " frame(s) to " << options.out_file.string() << '\n';
  return kOk;
}

}  // namespace iutq::cli
