#include "vper/theorem_probe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vper/number_theory.hpp"
#include "vper/periodization.hpp"
#include "vper/quadrature.hpp"

namespace vper::probe {

namespace {

double conj(double p) { return p == 1.0 ? norms::kInfinity : p / (p - 1.0); }

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// x -> P(t |x|).
class DilatedProfile final : public RadialProfile {
 public:
  DilatedProfile(ProfilePtr base, double t) : ptr_(std::move(base)), base_(*ptr_), t_(t) {}
  int dimension() const override { return base_.dimension(); }
  double value(double r) const override { return base_.value(t_ * r); }
  double fourier(double rho) const override { return std::pow(t_, -dimension()) * base_.fourier(rho / t_); }
  double majorant(double r) const override { return base_.majorant(t_ * r); }
  DecayEnvelope envelope() const override {
    // 1 + t r >= min(1, t)(1 + r).
    auto e = base_.envelope();
    e.A *= std::pow(std::min(1.0, t_), -e.s);
    return e;
  }
  std::vector<Interval> frequency_support() const override {
    auto s = base_.frequency_support();
    for (auto& iv : s) iv = {t_ * iv.lo, t_ * iv.hi};
    return s;
  }
  double envelope_radius() const override { return base_.envelope_radius() / t_; }
  double value_error() const override { return base_.value_error(); }
  std::string describe() const override { return "dilate(" + base_.describe() + ", t=" + num(t_) + ")"; }

 private:
  ProfilePtr ptr_;
  const RadialProfile& base_;
  double t_;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  const double hi = v[m];
  if (v.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)));
}

ProbeMember make_member(std::string label, MemberKind kind, TestFunction f) {
  ProbeMember m{std::move(label), kind, std::move(f)};
  for (const auto& iv : m.f.frequency_support()) m.support_width += iv.hi - iv.lo;
  const auto cert = certify_frequency_support(m.f);
  m.certified = cert.certified;
  m.certificate = cert.detail;
  return m;
}

}  // namespace

double alpha_exponent(int d, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("alpha_exponent: need 1 <= p <= 2");
  return 0.5 * d * (2.0 - p) / p;
}

double p_limit(int d) { return 2.0 * d / (d + 2.0); }

RangeCheck admissible_range(int d, double p, double r) {
  RangeCheck c;
  if (d < 3) {
    c.annotation = "d = " + std::to_string(d) + ": the range 1 <= p < 2d/(d+2) = " + num(p_limit(d)) + " is empty";
    return c;
  }
  if (!(p >= 1.0 && p < p_limit(d))) {
    c.annotation = "p = " + num(p) + " outside 1 <= p < 2d/(d+2) = " + num(p_limit(d));
    return c;
  }
  const double pc = conj(p);
  // Relative slack so p' = 11 for p = 1.1 survives rounding.
  if (r > pc * (1.0 + 1e-12)) {
    c.annotation = "r = " + num(r) + " > p' = " + num(pc) + ": rectangle family witnesses sharpness";
    return c;
  }
  if (r < p * (1.0 - 1e-12)) {
    c.annotation = "r = " + num(r) + " < p = " + num(p) + ": small-ball family witnesses sharpness";
    return c;
  }
  c.in_range = true;
  return c;
}

bool admissible_range_check(int d, double p, double r) { return admissible_range(d, p, r).in_range; }

const char* to_string(MemberKind k) {
  switch (k) {
    case MemberKind::Annulus: return "annulus";
    case MemberKind::Dilate: return "dilate";
    case MemberKind::Translate: return "translate";
    case MemberKind::Modulation: return "modulation";
    case MemberKind::Combination: return "combination";
  }
  return "?";
}

ProbeFamily build_family(int d, double p, const ProbeOptions& opt) {
  if (d < 3 || !(p >= 1.0 && p < p_limit(d))) {
    throw std::invalid_argument("probe: need d >= 3 and 1 <= p < 2d/(d+2) = " + num(p_limit(std::max(d, 1))) +
                                " (got d = " + std::to_string(d) + ", p = " + num(p) + ")");
  }
  if (opt.m_lo < 1 || opt.m_hi < opt.m_lo) throw std::invalid_argument("probe: bad m range");
  ProbeFamily fam;
  fam.d = d;
  fam.p = p;
  const auto R = nt::radii(d, std::sqrt(static_cast<double>(opt.m_hi)) + 2.0);
  std::vector<ProfilePtr> annuli;
  for (std::size_t i = 0; i + 1 < R.size(); ++i) {
    const auto a2 = R.squared[i];
    if (a2 < opt.m_lo || a2 > opt.m_hi) continue;
    const double lo = R.radius(i) + opt.margin, hi = R.radius(i + 1) - opt.margin;
    if (!(hi > lo)) continue;
    auto prof = std::make_shared<const AnnulusProfile>(d, lo, hi);
    annuli.push_back(prof);
    fam.members.push_back(make_member("annulus(" + std::to_string(a2) + "," + std::to_string(R.squared[i + 1]) + ")",
                                      MemberKind::Annulus, TestFunction(prof)));
  }
  if (annuli.empty()) throw std::invalid_argument("probe: no annulus in the requested m range");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  const auto pick = [&] { return static_cast<std::size_t>(rng() % annuli.size()); };
  for (std::size_t k = 0; k < opt.translates; ++k) {
    const auto i = pick();
    std::vector<double> tau(static_cast<std::size_t>(d));
    for (auto& t : tau) t = 4.0 * unit(rng) - 2.0;
    fam.members.push_back(make_member(fam.members[i].label + "+translate#" + std::to_string(k), MemberKind::Translate,
                                      TestFunction(annuli[i]).translated(tau)));
  }
  for (std::size_t k = 0; k < opt.dilates; ++k) {
    const auto i = pick();
    // Any t keeping t * [lo, hi] inside the lattice gap.
    const auto& a = static_cast<const AnnulusProfile&>(*annuli[i]);
    const double t_lo = (a.lo() - 0.5 * opt.margin) / a.lo(), t_hi = (a.hi() + 0.5 * opt.margin) / a.hi();
    const double t = t_lo + (t_hi - t_lo) * unit(rng);
    fam.members.push_back(make_member(fam.members[i].label + "+dilate#" + std::to_string(k), MemberKind::Dilate,
                                      TestFunction(std::make_shared<const DilatedProfile>(annuli[i], t))));
  }
  for (std::size_t k = 0; k < opt.modulations; ++k) {
    const auto i = pick();
    // |theta| below the margin keeps the shifted support off the spheres.
    std::vector<double> theta(static_cast<std::size_t>(d));
    double n2 = 0.0;
    for (auto& t : theta) {
      t = gauss(rng);
      n2 += t * t;
    }
    const double len = 0.9 * opt.margin * unit(rng) / std::sqrt(n2);
    for (auto& t : theta) t *= len;
    fam.members.push_back(make_member(fam.members[i].label + "+modulate#" + std::to_string(k), MemberKind::Modulation,
                                      TestFunction(annuli[i]).modulated(theta)));
  }
  for (std::size_t k = 0; k < opt.combinations && annuli.size() > 1; ++k) {
    const auto i = pick();
    auto j = pick();
    while (j == i) j = pick();
    const double ci = (0.3 + 0.7 * unit(rng)) * (rng() % 2 ? 1.0 : -1.0);
    const double cj = (0.3 + 0.7 * unit(rng)) * (rng() % 2 ? 1.0 : -1.0);
    auto prof = std::make_shared<const CombinationProfile>(std::vector<ProfilePtr>{annuli[i], annuli[j]},
                                                           std::vector<double>{ci, cj});
    fam.members.push_back(make_member("combo(" + fam.members[i].label + "," + fam.members[j].label + ")",
                                      MemberKind::Combination, TestFunction(prof)));
  }

  // Numeric vanishing check where the lattice sum is small enough.
  std::vector<Rotation> rots;
  for (int k = 0; k < opt.rotations; ++k) rots.push_back(sample_rotation(d, opt.seed * 1000 + static_cast<std::uint64_t>(k)));
  const auto grid = cube_grid(d, opt.grid_per_axis, std::min(d, 3));
  const double ball = std::pow(quad::kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  for (auto& m : fam.members) {
    const double Rl = lattice_radius_for(m.f, 1e-8);
    if (ball * std::pow(Rl + 1.0, d) > opt.numeric_term_cap) continue;
    const auto rep = check_vanishing(m.f, rots, grid, opt.vanishing_tol, 1e-8);
    m.numeric_checked = true;
    m.numeric_pass = rep.pass;
    m.numeric_max = rep.max_abs;
  }
  return fam;
}

ProbeReport probe_ratio(ProbeFamily& fam) {
  ProbeReport rep;
  rep.d = fam.d;
  rep.p = fam.p;
  rep.p_conjugate = conj(fam.p);
  for (const auto& m : fam.members) {
    if (!m.certified) throw std::runtime_error("probe: member " + m.label + " failed support certification: " + m.certificate);
  }
  const double q = rep.p_conjugate;
  const double e = fam.d * (1.0 / fam.p - (std::isinf(q) ? 0.0 : 1.0 / q));
  const auto n = static_cast<std::ptrdiff_t>(fam.members.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& m = fam.members[static_cast<std::size_t>(i)];
    m.norm_p = norms::lp_norm(m.f, fam.p);
    m.norm_pc = norms::lp_norm(m.f, q);
    m.ratio = m.norm_pc.value / m.norm_p.value;
    m.normalized_ratio = m.ratio * std::pow(m.support_width, -e);
  }
  std::vector<double> raw, normed;
  bool numeric_ok = true;
  for (const auto& m : fam.members) {
    raw.push_back(m.ratio);
    normed.push_back(m.normalized_ratio);
    rep.certified += m.certified;
    if (m.numeric_checked) {
      ++rep.numeric_checked;
      if (!m.numeric_pass) {
        numeric_ok = false;
        rep.log.push_back("numeric vanishing check failed for " + m.label + " (max " + num(m.numeric_max) + ")");
      }
    }
  }
  rep.max_ratio = *std::max_element(raw.begin(), raw.end());
  rep.median_ratio = median(raw);
  rep.max_normalized = *std::max_element(normed.begin(), normed.end());
  rep.median_normalized = median(normed);
  rep.pass = numeric_ok && rep.max_ratio <= 10.0 * rep.median_ratio;
  rep.log.push_back(std::to_string(fam.members.size()) + " members, " + std::to_string(rep.certified) +
                    " certified by exact support, " + std::to_string(rep.numeric_checked) + " also checked numerically");
  return rep;
}

double dilation_slope(const ProfilePtr& base, double p, std::span<const double> t) {
  const double q = conj(p);
  std::vector<double> ratio;
  for (double s : t) {
    const DilatedProfile prof(base, s);
    ratio.push_back(norms::lp_norm_radial(prof, q).value / norms::lp_norm_radial(prof, p).value);
  }
  return quad::fit_loglog(t, ratio).slope;
}

}  // namespace vper::probe
