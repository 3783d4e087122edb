#include "crn/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace crn {

RateSchedule::RateSchedule(double eta, std::vector<RateFunction> functions)
    : eta_(eta), functions_(std::move(functions)) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("eta must lie in (0,1)");
  // Open interval: keep a relative margin so rate(t) never touches eta or 1/eta.
  lo_ = eta * (1 + 1e-12);
  hi_ = (1 / eta) * (1 - 1e-12);
  for (const auto& f : functions_) {
    if (auto p = std::get_if<PiecewiseRate>(&f)) {
      if (p->values.size() != p->breakpoints.size() + 1)
        throw std::invalid_argument("piecewise rate needs one more value than breakpoints");
      if (!std::is_sorted(p->breakpoints.begin(), p->breakpoints.end()))
        throw std::invalid_argument("piecewise breakpoints must be ascending");
    }
  }
}

RateSchedule RateSchedule::constant(std::size_t reactions, double eta, double value) {
  return RateSchedule(eta, std::vector<RateFunction>(reactions, ConstantRate{value}));
}

RateSchedule RateSchedule::fixed(const std::vector<double>& kappas) {
  double lo = 1.0;
  for (double k : kappas) {
    if (!(k > 0) || !std::isfinite(k)) throw std::invalid_argument("rate constants must be positive");
    lo = std::min({lo, k, 1 / k});
  }
  std::vector<RateFunction> fs;
  for (double k : kappas) fs.push_back(ConstantRate{k});
  return RateSchedule(0.5 * lo, std::move(fs));
}

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

PiecewiseRate make_piecewise(std::mt19937_64& rng, double lo, double hi, double interval, double horizon) {
  PiecewiseRate p;
  std::size_t pieces = static_cast<std::size_t>(std::ceil(horizon / interval));
  for (std::size_t k = 1; k < std::max<std::size_t>(pieces, 1); ++k) p.breakpoints.push_back(k * interval);
  for (std::size_t k = 0; k <= p.breakpoints.size(); ++k) p.values.push_back(log_uniform(rng, lo, hi));
  return p;
}

}  // namespace

RateSchedule RateSchedule::random_piecewise(std::size_t reactions, double eta, double interval, double horizon,
                                            std::uint64_t seed) {
  if (!(interval > 0)) throw std::invalid_argument("piecewise interval must be positive");
  std::mt19937_64 rng(seed);
  std::vector<RateFunction> fs;
  for (std::size_t r = 0; r < reactions; ++r) fs.push_back(make_piecewise(rng, eta, 1 / eta, interval, horizon));
  return RateSchedule(eta, std::move(fs));
}

RateSchedule RateSchedule::random_sinusoidal(std::size_t reactions, double eta, double amplitude, double period,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0, 2 * std::numbers::pi);
  std::vector<RateFunction> fs;
  for (std::size_t r = 0; r < reactions; ++r) fs.push_back(SinusoidalRate{1.0, amplitude, period, phase(rng)});
  return RateSchedule(eta, std::move(fs));
}

RateSchedule RateSchedule::for_network(const ReactionNetwork& net, double eta, ScheduleKind kind, std::uint64_t seed,
                                       double horizon, double interval) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0, 2 * std::numbers::pi);
  std::vector<RateFunction> fs;
  for (const auto& rx : net.reactions()) {
    double lo = eta;
    double hi = 1 / eta;
    std::optional<double> fixed;
    if (rx.rate) {
      if (auto f = std::get_if<FixedRate>(&*rx.rate)) {
        fixed = f->value;
        if (!(f->value > eta && f->value < 1 / eta))
          throw std::invalid_argument("fixed rate outside (eta, 1/eta); choose a smaller eta");
      } else {
        auto i = std::get<RateInterval>(*rx.rate);
        lo = std::max(lo, i.lo);
        hi = std::min(hi, i.hi);
        if (!(lo < hi)) throw std::invalid_argument("rate interval does not meet (eta, 1/eta)");
      }
    }
    switch (kind) {
      case ScheduleKind::constant:
        fs.push_back(ConstantRate{fixed.value_or(std::sqrt(lo * hi))});
        break;
      case ScheduleKind::piecewise:
        if (fixed) fs.push_back(ConstantRate{*fixed});
        else fs.push_back(make_piecewise(rng, lo, hi, interval, horizon));
        break;
      case ScheduleKind::sinusoidal: {
        double mean = fixed.value_or(std::sqrt(lo * hi));
        // amplitude keeps mean*(1±a) inside (lo, hi)
        double amp = 0.9 * std::min(1 - lo / mean, hi / mean - 1);
        fs.push_back(SinusoidalRate{mean, std::max(amp, 0.0), 2 * interval, phase(rng)});
        break;
      }
    }
  }
  return RateSchedule(eta, std::move(fs));
}

double RateSchedule::clamp(double v) const { return std::clamp(v, lo_, hi_); }

double RateSchedule::rate(std::size_t reaction, double t) const {
  const auto& f = functions_.at(reaction);
  if (auto c = std::get_if<ConstantRate>(&f)) return clamp(c->value);
  if (auto p = std::get_if<PiecewiseRate>(&f)) {
    auto it = std::upper_bound(p->breakpoints.begin(), p->breakpoints.end(), t);
    return clamp(p->values[static_cast<std::size_t>(it - p->breakpoints.begin())]);
  }
  const auto& s = std::get<SinusoidalRate>(f);
  return clamp(s.mean * (1 + s.amplitude * std::sin(2 * std::numbers::pi * t / s.period + s.phase)));
}

void RateSchedule::rates(double t, std::vector<double>& out) const {
  out.resize(functions_.size());
  for (std::size_t r = 0; r < functions_.size(); ++r) out[r] = rate(r, t);
}

double RateSchedule::next_breakpoint(double t) const {
  double next = std::numeric_limits<double>::infinity();
  for (const auto& f : functions_) {
    if (auto p = std::get_if<PiecewiseRate>(&f)) {
      auto it = std::upper_bound(p->breakpoints.begin(), p->breakpoints.end(), t);
      if (it != p->breakpoints.end()) next = std::min(next, *it);
    }
  }
  return next;
}

}  // namespace crn
