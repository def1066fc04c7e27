#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tyche/capability.hpp"

namespace tyche {

enum class Group { Expert, Informed, Uninformed };

inline constexpr Group kAllGroups[] = {Group::Expert, Group::Informed, Group::Uninformed};

std::string_view to_string(Group g);
std::optional<Group> parse_group(std::string_view text);

/// One participant: demographic answers plus 1..5 Likert ratings. A
/// participant may rate only part of the catalog.
struct SurveyResponse {
  std::string participant;
  Group group = Group::Uninformed;
  int age = 0;
  int household_size = 0;
  std::string platform;
  int app_count = 0;
  std::map<OperationSig, int> ratings;
};

/// Survey CSV: a demographics section with header
/// `participant,group,age,household,platform,app_count`, a `---` line, then a
/// ratings section with header `participant,operation,rating`.
std::vector<SurveyResponse> parse_survey(std::string_view text, const Catalog& catalog);
std::vector<SurveyResponse> load_survey(const std::string& path, const Catalog& catalog);

struct Removal {
  std::string participant;
  std::string reason;
};

struct FilterResult {
  std::vector<SurveyResponse> kept;
  std::vector<Removal> removed;
  /// Kept without being judged (too few ratings for the test).
  std::vector<std::string> flagged;
};

/// Drops respondents whose demographic answers are impossible:
/// age outside [18, 100], household outside [1, 20], or a negative app count.
FilterResult filter_indicator(std::vector<SurveyResponse> responses);

/// Minimum number of rated items for the random-clicker test.
inline constexpr int kMinRatedItems = 10;

/// Removes random clickers: respondents whose ratings are independent of
/// item risk. Items are split at the median population mean; each
/// respondent's 2x5 (half x rating) table is tested with Pearson's
/// chi-square after pooling rating columns with expected count < 5, and
/// respondents for whom independence is not rejected at `alpha` are removed.
/// Population means come from `responses` themselves.
FilterResult filter_chi_square(std::vector<SurveyResponse> responses, double alpha = 0.05);

/// Per-operation mean rating over the respondents of `group`. Throws
/// UnratedOperation if a catalog operation has no rating in the group.
std::map<OperationSig, double> aggregate_means(const std::vector<SurveyResponse>& responses, Group group,
                                               const Catalog& catalog);

}  // namespace tyche
