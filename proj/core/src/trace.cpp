#include "revosim/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace revosim {

double round_sig(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

void append_int_list(std::string& out, const std::vector<int>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  out += ']';
}

void append_opt_int(std::string& out, const std::optional<int>& v) {
  if (v) out += std::to_string(*v);
  else out += "null";
}

}  // namespace

std::string format_event(const TraceEvent& e) {
  std::string line;
  line.reserve(192);
  line += "{\"candidate_id\":" + std::to_string(e.candidate_id);
  line += ",\"begin_ts\":";
  append_double(line, e.begin_ts);
  line += ",\"end_ts\":";
  append_double(line, e.end_ts);
  line += ",\"worker_id\":" + std::to_string(e.worker_id);
  line += ",\"sequence\":";
  append_int_list(line, e.sequence.choices);
  line += ",\"quality\":";
  append_double(line, e.quality);
  line += ",\"stage\":" + std::to_string(e.stage);
  line += ",\"donor_id\":";
  append_opt_int(line, e.donor_id);
  line += ",\"donor_prefix_len\":";
  append_opt_int(line, e.donor_prefix_len);
  if (e.mutation_index || e.sampled_ids) {
    line += ",\"mutation_index\":";
    append_opt_int(line, e.mutation_index);
    line += ",\"sampled_ids\":";
    if (e.sampled_ids) append_int_list(line, *e.sampled_ids);
    else line += "null";
  }
  line += '}';
  return line;
}

void write_trace(const std::vector<TraceEvent>& events, const std::string& path) {
  std::string buffer;
  buffer.reserve(events.size() * 192);
  double prev_end = -1.0;
  for (const auto& e : events) {
    if (e.end_ts < prev_end) {
      throw TraceError("write_trace: events not ordered by end_ts (candidate " +
                       std::to_string(e.candidate_id) + ")");
    }
    prev_end = e.end_ts;
    buffer += format_event(e);
    buffer += '\n';
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TraceError("write_trace: cannot open " + path);
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw TraceError("write_trace: I/O failure writing " + path);
}

namespace {

TraceEvent parse_line(const std::string& line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw TraceError("line " + std::to_string(line_no) + ": malformed record: " + ex.what());
  }
  auto field = [&](const char* name) -> const nlohmann::json& {
    auto it = j.find(name);
    if (it == j.end()) {
      throw TraceError("line " + std::to_string(line_no) + ": missing field " + name);
    }
    return *it;
  };
  TraceEvent e;
  try {
    e.candidate_id = field("candidate_id").get<int>();
    e.begin_ts = field("begin_ts").get<double>();
    e.end_ts = field("end_ts").get<double>();
    e.worker_id = field("worker_id").get<int>();
    e.sequence.choices = field("sequence").get<std::vector<int>>();
    e.quality = field("quality").get<double>();
    e.stage = field("stage").get<int>();
    const auto& donor = field("donor_id");
    if (!donor.is_null()) e.donor_id = donor.get<int>();
    const auto& dpl = field("donor_prefix_len");
    if (!dpl.is_null()) e.donor_prefix_len = dpl.get<int>();
    if (j.contains("mutation_index") && !j["mutation_index"].is_null()) {
      e.mutation_index = j["mutation_index"].get<int>();
    }
    if (j.contains("sampled_ids") && !j["sampled_ids"].is_null()) {
      e.sampled_ids = j["sampled_ids"].get<std::vector<int>>();
    }
  } catch (const nlohmann::json::exception& ex) {
    throw TraceError("line " + std::to_string(line_no) + ": bad field type: " + ex.what());
  }
  if (e.stage != 1 && e.stage != 2) {
    throw TraceError("line " + std::to_string(line_no) + ": stage must be 1 or 2");
  }
  if (e.end_ts <= e.begin_ts) {
    throw TraceError("line " + std::to_string(line_no) + ": end_ts <= begin_ts");
  }
  return e;
}

}  // namespace

std::vector<TraceEvent> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("read_trace: cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<TraceEvent> events;
  std::set<int> seen_ids;
  std::size_t pos = 0, line_no = 0;
  double prev_end = -1.0;
  while (pos < content.size()) {
    std::size_t nl = content.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) {
      throw TraceError("line " + std::to_string(line_no) + ": truncated final line");
    }
    std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    TraceEvent e = parse_line(line, line_no);
    if (!seen_ids.insert(e.candidate_id).second) {
      throw TraceError("line " + std::to_string(line_no) + ": duplicate candidate_id " +
                       std::to_string(e.candidate_id));
    }
    if (e.end_ts < prev_end) {
      throw TraceError("line " + std::to_string(line_no) + ": events not ordered by end_ts");
    }
    prev_end = e.end_ts;
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace revosim
