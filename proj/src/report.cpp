#include "kdvbbm/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "kdvbbm/errors.hpp"

namespace kdvbbm {

ExponentFit fit_exponent(std::span<const Point> series) {
  if (series.size() < 3) throw DomainError("fit_exponent needs at least 3 points");
  const double n = static_cast<double>(series.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : series) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("fit_exponent needs positive data");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : series) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_exponent needs distinct scales");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (const auto& [x, y] : series) {
    const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

double FitRecord::deviation() const {
  if (expected == 0.0) return std::abs(fit.slope);
  return std::abs(fit.slope - expected) / std::abs(expected);
}

bool FitRecord::passed() const {
  if (expected == 0.0) return std::abs(fit.slope) <= abs_tolerance;
  return deviation() <= rel_tolerance;
}

bool CheckRecord::passed() const {
  if (!std::isfinite(value)) return false;
  switch (relation) {
    case Relation::at_most: return value <= bound;
    case Relation::at_least: return value >= bound;
    case Relation::within: return value >= bound && value <= upper;
  }
  return false;
}

CheckRecord CheckRecord::at_most(std::string name, double value, double bound) {
  return {std::move(name), value, bound, 0.0, Relation::at_most};
}
CheckRecord CheckRecord::at_least(std::string name, double value, double bound) {
  return {std::move(name), value, bound, 0.0, Relation::at_least};
}
CheckRecord CheckRecord::within(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, lo, hi, Relation::within};
}

Series& ExperimentReport::series(const std::string& name) {
  for (auto& s : series_)
    if (s.name == name) return s;
  series_.push_back({name, {}});
  return series_.back();
}

const Series* ExperimentReport::find_series(const std::string& name) const {
  for (const auto& s : series_)
    if (s.name == name) return &s;
  return nullptr;
}

const FitRecord& ExperimentReport::fit(const std::string& name, const std::string& series_name,
                                       double expected, double rel_tolerance,
                                       double abs_tolerance) {
  const Series* s = find_series(series_name);
  if (!s) throw DomainError("no series named '" + series_name + "'");
  FitRecord rec{name, series_name, fit_exponent(s->points), expected, rel_tolerance,
                abs_tolerance};
  fits_.push_back(rec);
  return fits_.back();
}

void ExperimentReport::absorb(const ExperimentReport& other, const std::string& prefix) {
  for (const auto& s : other.series_) series_.push_back({prefix + s.name, s.points});
  for (auto f : other.fits_) {
    f.name = prefix + f.name;
    f.series = prefix + f.series;
    fits_.push_back(std::move(f));
  }
  for (auto c : other.checks_) {
    c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.notes_.items()) notes_[prefix + k] = v;
  for (const auto& e : other.errors_) errors_.push_back(prefix + e);
}

bool ExperimentReport::passed() const {
  if (!errors_.empty()) return false;
  for (const auto& f : fits_)
    if (!f.passed()) return false;
  for (const auto& c : checks_)
    if (!c.passed()) return false;
  return true;
}

namespace {

const char* relation_name(CheckRecord::Relation r) {
  switch (r) {
    case CheckRecord::Relation::at_most: return "<=";
    case CheckRecord::Relation::at_least: return ">=";
    case CheckRecord::Relation::within: return "within";
  }
  return "?";
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json ExperimentReport::to_json() const {
  Json j;
  j["experiment"] = id_;
  j["passed"] = passed();
  j["inputs"] = inputs_;
  Json series = Json::object();
  for (const auto& s : series_) {
    Json pts = Json::array();
    for (const auto& [x, y] : s.points) pts.push_back({finite_or_null(x), finite_or_null(y)});
    series[s.name] = pts;
  }
  j["series"] = series;
  Json fits = Json::array();
  for (const auto& f : fits_) {
    Json e;
    e["name"] = f.name;
    e["series"] = f.series;
    e["slope"] = finite_or_null(f.fit.slope);
    e["stderr"] = finite_or_null(f.fit.stderr_slope);
    e["expected"] = f.expected;
    e["rel_tolerance"] = f.rel_tolerance;
    e["abs_tolerance"] = f.abs_tolerance;
    e["deviation"] = finite_or_null(f.deviation());
    e["passed"] = f.passed();
    fits.push_back(e);
  }
  j["fits"] = fits;
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json e;
    e["name"] = c.name;
    e["value"] = finite_or_null(c.value);
    e["relation"] = relation_name(c.relation);
    e["bound"] = c.bound;
    if (c.relation == CheckRecord::Relation::within) e["upper"] = c.upper;
    e["passed"] = c.passed();
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["notes"] = notes_;
  j["errors"] = errors_;
  j["wall_seconds"] = wall_seconds_;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void ExperimentReport::write_series_csv(std::ostream& os) const {
  os << "series,scale,value\n";
  for (const auto& s : series_)
    for (const auto& [x, y] : s.points)
      os << s.name << ',' << format_double(x) << ',' << format_double(y) << '\n';
}

}  // namespace kdvbbm
