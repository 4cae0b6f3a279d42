#include "peersel/io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace peersel {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

int parse_id(const std::string& field, const char* what) {
  try {
    std::size_t used = 0;
    int value = std::stoi(field, &used);
    if (used != field.size() || value < 0) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + ": '" + field + "'");
  }
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

void expect_header(std::istream& in, const std::string& header, const char* what) {
  std::string line;
  if (!next_line(in, line) || line != header) {
    throw ParseError(std::string("expected header '") + header + "' in " + what + " file");
  }
}

}  // namespace

ReviewProfile read_profile_csv(std::istream& in) {
  expect_header(in, "reviewer,reviewee,score", "profile");
  struct Row {
    int reviewer;
    int reviewee;
    Rat score;
  };
  std::vector<Row> rows;
  int max_id = -1;
  std::string line;
  while (next_line(in, line)) {
    auto fields = split(line, ',');
    if (fields.size() != 3) throw ParseError("profile row needs 3 fields: '" + line + "'");
    Row row;
    row.reviewer = parse_id(fields[0], "reviewer id");
    row.reviewee = parse_id(fields[1], "reviewee id");
    try {
      row.score = parse_decimal(fields[2]);
    } catch (const std::invalid_argument& error) {
      throw ParseError(error.what());
    }
    max_id = std::max({max_id, row.reviewer, row.reviewee});
    rows.push_back(std::move(row));
  }
  ReviewProfile profile(max_id + 1);
  for (auto& row : rows) {
    if (profile.find(row.reviewer, row.reviewee)) {
      throw ParseError("duplicate profile entry " + std::to_string(row.reviewer) + " -> " +
                       std::to_string(row.reviewee));
    }
    profile.set(row.reviewer, row.reviewee, std::move(row.score));
  }
  return profile;
}

namespace {

/// Shortest exact decimal; profile scores live in a decimal file format, so
/// a score whose denominator has factors other than 2 and 5 has no exact
/// representation and is rejected rather than silently rounded.
std::string exact_decimal(const Rat& value) {
  if (rat_is_integer(value)) return value.get_num().get_str();
  Int den = value.get_den();
  int digits = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++digits;
  }
  int fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    throw std::invalid_argument("score " + format_fraction(value) +
                                " has no finite decimal representation");
  }
  return format_decimal(value, std::max(digits, fives));
}

}  // namespace

void write_profile_csv(std::ostream& out, const ReviewProfile& profile) {
  out << "reviewer,reviewee,score\n";
  for (AgentId reviewer = 0; reviewer < profile.n; ++reviewer) {
    for (const auto& [reviewee, score] : profile.entries[reviewer]) {
      out << reviewer << ',' << reviewee << ',' << exact_decimal(score) << '\n';
    }
  }
}

Clustering read_clustering_csv(std::istream& in) {
  expect_header(in, "agent,cluster", "clustering");
  std::vector<std::pair<int, int>> rows;
  int max_agent = -1, max_cluster = -1;
  std::string line;
  while (next_line(in, line)) {
    auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("clustering row needs 2 fields: '" + line + "'");
    int agent = parse_id(fields[0], "agent id");
    int cluster = parse_id(fields[1], "cluster id");
    max_agent = std::max(max_agent, agent);
    max_cluster = std::max(max_cluster, cluster);
    rows.emplace_back(agent, cluster);
  }
  Clustering clustering;
  clustering.ell = max_cluster + 1;
  clustering.assignment.assign(max_agent + 1, -1);
  for (auto [agent, cluster] : rows) {
    if (clustering.assignment[agent] != -1) {
      throw ParseError("agent " + std::to_string(agent) + " assigned to two clusters");
    }
    clustering.assignment[agent] = cluster;
  }
  for (int agent = 0; agent <= max_agent; ++agent) {
    if (clustering.assignment[agent] == -1) {
      throw ParseError("agent " + std::to_string(agent) + " has no cluster row");
    }
  }
  return clustering;
}

void write_clustering_csv(std::ostream& out, const Clustering& clustering) {
  out << "agent,cluster\n";
  for (AgentId agent = 0; agent < clustering.n(); ++agent) {
    out << agent << ',' << clustering.assignment[agent] << '\n';
  }
}

ReviewAssignment read_assignment_csv(std::istream& in) {
  expect_header(in, "reviewer,reviewee", "assignment");
  std::vector<std::pair<int, int>> rows;
  int max_id = -1;
  std::string line;
  while (next_line(in, line)) {
    auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("assignment row needs 2 fields: '" + line + "'");
    int reviewer = parse_id(fields[0], "reviewer id");
    int reviewee = parse_id(fields[1], "reviewee id");
    max_id = std::max({max_id, reviewer, reviewee});
    rows.emplace_back(reviewer, reviewee);
  }
  ReviewAssignment assignment;
  assignment.reviews.resize(max_id + 1);
  for (auto [reviewer, reviewee] : rows) assignment.reviews[reviewer].push_back(reviewee);
  std::size_t m = 0;
  for (auto& targets : assignment.reviews) {
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
      throw ParseError("assignment lists a pair twice");
    }
    m = std::max(m, targets.size());
  }
  assignment.m = static_cast<int>(m);
  return assignment;
}

void write_assignment_csv(std::ostream& out, const ReviewAssignment& assignment) {
  out << "reviewer,reviewee\n";
  for (AgentId reviewer = 0; reviewer < assignment.n(); ++reviewer) {
    for (AgentId reviewee : assignment.reviews[reviewer]) {
      out << reviewer << ',' << reviewee << '\n';
    }
  }
}

GroundTruth read_ground_truth(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("empty ground truth file");
  GroundTruth truth;
  for (const auto& field : split(line, ',')) {
    truth.order.push_back(parse_id(field, "agent id"));
  }
  return truth;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  for (std::size_t i = 0; i < truth.order.size(); ++i) {
    if (i) out << ',';
    out << truth.order[i];
  }
  out << '\n';
}

ReviewAssignment assignment_from_profile(const ReviewProfile& profile) {
  ReviewAssignment assignment;
  assignment.reviews.resize(profile.n);
  std::size_t m = 0;
  for (AgentId reviewer = 0; reviewer < profile.n; ++reviewer) {
    for (const auto& [reviewee, score] : profile.entries[reviewer]) {
      assignment.reviews[reviewer].push_back(reviewee);
    }
    m = std::max(m, assignment.reviews[reviewer].size());
  }
  assignment.m = static_cast<int>(m);
  return assignment;
}

}  // namespace peersel
