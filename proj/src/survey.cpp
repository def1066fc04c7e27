#include "tyche/survey.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tyche/error.hpp"
#include "tyche/stats.hpp"

namespace tyche {

std::string_view to_string(Group g) {
  switch (g) {
    case Group::Expert: return "expert";
    case Group::Informed: return "informed";
    case Group::Uninformed: return "uninformed";
  }
  return "?";
}

std::optional<Group> parse_group(std::string_view text) {
  for (Group g : kAllGroups)
    if (to_string(g) == text) return g;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, "unterminated quoted field", SourceSpan{line_no, 1});
  fields.emplace_back(trim(cur));
  return fields;
}

int to_int(std::string_view s, std::string_view what, int line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorKind::ParseError, std::string(what) + " must be an integer, got '" + std::string(s) + "'",
                SourceSpan{line_no, 1});
  return v;
}

}  // namespace

std::vector<SurveyResponse> parse_survey(std::string_view text, const Catalog& catalog) {
  enum class Section { DemoHeader, Demo, RatingHeader, Ratings } section = Section::DemoHeader;
  std::vector<SurveyResponse> responses;
  std::map<std::string, std::size_t, std::less<>> index;
  int line_no = 0;

  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    SourceSpan at{line_no, 1};

    switch (section) {
      case Section::DemoHeader:
        if (line != "participant,group,age,household,platform,app_count")
          throw Error(ErrorKind::ParseError,
                      "expected header 'participant,group,age,household,platform,app_count'", at);
        section = Section::Demo;
        break;
      case Section::Demo: {
        if (line == "---") {
          section = Section::RatingHeader;
          break;
        }
        auto f = split_csv(line, line_no);
        if (f.size() != 6) throw Error(ErrorKind::ParseError, "demographics row needs 6 fields", at);
        SurveyResponse r;
        r.participant = f[0];
        auto g = parse_group(f[1]);
        if (!g) throw Error(ErrorKind::ParseError, "group must be expert, informed or uninformed", at);
        r.group = *g;
        r.age = to_int(f[2], "age", line_no);
        r.household_size = to_int(f[3], "household", line_no);
        r.platform = f[4];
        r.app_count = to_int(f[5], "app_count", line_no);
        if (r.participant.empty()) throw Error(ErrorKind::ParseError, "empty participant id", at);
        if (!index.emplace(r.participant, responses.size()).second)
          throw Error(ErrorKind::ParseError, "participant '" + r.participant + "' listed twice", at);
        responses.push_back(std::move(r));
        break;
      }
      case Section::RatingHeader:
        if (line != "participant,operation,rating")
          throw Error(ErrorKind::ParseError, "expected header 'participant,operation,rating'", at);
        section = Section::Ratings;
        break;
      case Section::Ratings: {
        auto f = split_csv(line, line_no);
        if (f.size() != 3) throw Error(ErrorKind::ParseError, "rating row needs 3 fields", at);
        auto it = index.find(f[0]);
        if (it == index.end())
          throw Error(ErrorKind::ParseError, "rating for unknown participant '" + f[0] + "'", at);
        auto op = parse_operation_id(f[1]);
        if (!op || !catalog.contains(*op))
          throw Error(ErrorKind::UnknownOperationId, "unknown operation '" + f[1] + "'", at);
        int rating = to_int(f[2], "rating", line_no);
        if (rating < 1 || rating > 5)
          throw Error(ErrorKind::RatingOutOfRange, "rating " + f[2] + " is outside 1..5", at);
        if (!responses[it->second].ratings.emplace(*op, rating).second)
          throw Error(ErrorKind::ParseError, "participant '" + f[0] + "' rated '" + f[1] + "' twice", at);
        break;
      }
    }
  }
  if (section != Section::Ratings && section != Section::RatingHeader)
    throw Error(ErrorKind::ParseError, "missing '---' separator before the ratings section",
                SourceSpan{std::max(line_no, 1), 1});
  return responses;
}

std::vector<SurveyResponse> load_survey(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open survey '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_survey(buf.str(), catalog);
  } catch (const Error& e) {
    throw e.in_file(path);
  }
}

FilterResult filter_indicator(std::vector<SurveyResponse> responses) {
  FilterResult out;
  for (auto& r : responses) {
    std::string reason;
    if (r.age < 18 || r.age > 100) reason = "age " + std::to_string(r.age) + " outside [18, 100]";
    else if (r.household_size < 1 || r.household_size > 20)
      reason = "household size " + std::to_string(r.household_size) + " outside [1, 20]";
    else if (r.app_count < 0) reason = "app count " + std::to_string(r.app_count) + " is negative";

    if (reason.empty()) out.kept.push_back(std::move(r));
    else out.removed.push_back({r.participant, std::move(reason)});
  }
  return out;
}

FilterResult filter_chi_square(std::vector<SurveyResponse> responses, double alpha) {
  std::map<OperationSig, std::pair<double, int>> sums;
  for (const auto& r : responses)
    for (const auto& [op, rating] : r.ratings) {
      auto& [sum, n] = sums[op];
      sum += rating;
      ++n;
    }

  std::vector<std::pair<double, OperationSig>> by_mean;
  for (const auto& [op, sn] : sums) by_mean.emplace_back(sn.first / sn.second, op);
  std::sort(by_mean.begin(), by_mean.end());
  if (by_mean.empty() || by_mean.front().first == by_mean.back().first)
    throw Error(ErrorKind::DegenerateInput, "random-clicker test needs at least two distinct item means");

  // lower half of items by population mean -> row 0, the rest -> row 1
  std::map<OperationSig, int> half;
  for (std::size_t i = 0; i < by_mean.size(); ++i) half[by_mean[i].second] = i < by_mean.size() / 2 ? 0 : 1;

  FilterResult out;
  for (auto& r : responses) {
    std::array<std::vector<int>, 2> table{std::vector<int>(5, 0), std::vector<int>(5, 0)};
    for (const auto& [op, rating] : r.ratings) ++table[half.at(op)][rating - 1];
    int row0 = 0, row1 = 0;
    for (int c = 0; c < 5; ++c) {
      row0 += table[0][c];
      row1 += table[1][c];
    }
    if (static_cast<int>(r.ratings.size()) < kMinRatedItems || row0 == 0 || row1 == 0) {
      out.flagged.push_back(r.participant);
      out.kept.push_back(std::move(r));
      continue;
    }
    auto test = chi_square_independence(table);
    if (test.dof == 0) {
      // pooling left a single column: too few ratings to judge
      out.flagged.push_back(r.participant);
      out.kept.push_back(std::move(r));
    } else if (test.p_value < alpha) {
      out.kept.push_back(std::move(r));
    } else {
      out.removed.push_back({r.participant, "ratings independent of item risk (chi2=" +
                                                std::to_string(test.statistic) + ", dof=" + std::to_string(test.dof) +
                                                ", p=" + std::to_string(test.p_value) + ")"});
    }
  }
  return out;
}

std::map<OperationSig, double> aggregate_means(const std::vector<SurveyResponse>& responses, Group group,
                                               const Catalog& catalog) {
  std::map<OperationSig, std::pair<long, int>> sums;
  for (const auto& r : responses) {
    if (r.group != group) continue;
    for (const auto& [op, rating] : r.ratings) {
      auto& [sum, n] = sums[op];
      sum += rating;
      ++n;
    }
  }
  std::map<OperationSig, double> means;
  for (const auto& op : catalog.all_operations()) {
    auto it = sums.find(op);
    if (it == sums.end())
      throw Error(ErrorKind::UnratedOperation,
                  "no " + std::string(to_string(group)) + " rating for '" + op.id() + "'");
    means[op] = static_cast<double>(it->second.first) / it->second.second;
  }
  return means;
}

}  // namespace tyche
