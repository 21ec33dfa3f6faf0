#pragma once

#include <deque>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace kdvbbm {

using Json = nlohmann::ordered_json;
using Point = std::pair<double, double>;

struct ExponentFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
};

/// Least squares of log(value) on log(scale). Needs >= 3 points, all positive.
ExponentFit fit_exponent(std::span<const Point> series);

struct Series {
  std::string name;
  std::vector<Point> points;  // (scale, value)
};

/// A fitted exponent with its target; passes when
/// |slope - expected| <= rel_tolerance * |expected| (or <= abs_tolerance when
/// the target is zero).
struct FitRecord {
  std::string name;
  std::string series;
  ExponentFit fit;
  double expected = 0.0;
  double rel_tolerance = 0.0;
  double abs_tolerance = 0.0;

  double deviation() const;
  bool passed() const;
};

/// A scalar acceptance rule: value <= bound, value >= bound, or
/// lo <= value <= hi ("within").
struct CheckRecord {
  enum class Relation { at_most, at_least, within };
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double upper = 0.0;
  Relation relation = Relation::at_most;

  bool passed() const;

  static CheckRecord at_most(std::string name, double value, double bound);
  static CheckRecord at_least(std::string name, double value, double bound);
  static CheckRecord within(std::string name, double value, double lo, double hi);
};

class ExperimentReport {
 public:
  explicit ExperimentReport(std::string id = "") : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  Json& inputs() { return inputs_; }
  const Json& inputs() const { return inputs_; }

  Series& series(const std::string& name);
  const Series* find_series(const std::string& name) const;
  const std::deque<Series>& all_series() const { return series_; }

  /// Fits `series_name` and records the result against `expected`.
  const FitRecord& fit(const std::string& name, const std::string& series_name,
                       double expected, double rel_tolerance, double abs_tolerance = 0.0);
  void check(CheckRecord c) { checks_.push_back(std::move(c)); }
  void note(std::string key, Json value) { notes_[key] = std::move(value); }
  void error(std::string message) { errors_.push_back(std::move(message)); }

  const std::deque<FitRecord>& fits() const { return fits_; }
  const std::vector<CheckRecord>& checks() const { return checks_; }
  const std::vector<std::string>& errors() const { return errors_; }
  const Json& notes() const { return notes_; }

  /// Copies series, fits, checks, notes and errors of `other`, with every
  /// name prefixed by `prefix`.
  void absorb(const ExperimentReport& other, const std::string& prefix);

  void set_wall_seconds(double s) { wall_seconds_ = s; }
  double wall_seconds() const { return wall_seconds_; }

  /// All fits and checks pass and no error was recorded.
  bool passed() const;

  Json to_json() const;
  /// Long format: `series,scale,value`, 17 significant digits.
  void write_series_csv(std::ostream& os) const;

 private:
  std::string id_;
  Json inputs_ = Json::object();
  // deques keep references returned by series() and fit() valid
  std::deque<Series> series_;
  std::deque<FitRecord> fits_;
  std::vector<CheckRecord> checks_;
  std::vector<std::string> errors_;
  Json notes_ = Json::object();
  double wall_seconds_ = 0.0;
};

/// `%.17g` formatting used by every CSV writer.
std::string format_double(double v);
/// Short `%g` form for series and check names.
std::string format_label(double v);

}  // namespace kdvbbm
