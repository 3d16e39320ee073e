#include "twistlab/repvar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace twistlab {

namespace {
constexpr double kCentralTol = 1e-12;
}

Representation::Representation(std::shared_ptr<const SurfacePresentation> presentation)
    : presentation_(std::move(presentation)) {
  presentation_->validate();
  for (size_t k = 0; k < 3; ++k) {
    size_t n = static_cast<size_t>(presentation_->generator_counts[k]);
    images_[k].resize(n);
    assigned_[k].assign(n, 0);
  }
}

Representation::Representation(const SurfacePresentation& presentation)
    : Representation(std::make_shared<SurfacePresentation>(presentation)) {}

void Representation::set(Gen kind, int index, const UnitQuaternion& value) {
  size_t k = static_cast<size_t>(kind);
  if (index < 1 || index > presentation_->count(kind)) {
    raise(ErrorCode::InvalidArgument,
          "generator " + std::string(1, gen_letter(kind)) + std::to_string(index) + " out of range");
  }
  images_[k][static_cast<size_t>(index) - 1] = value;
  assigned_[k][static_cast<size_t>(index) - 1] = 1;
}

bool Representation::assigned(Gen kind, int index) const {
  size_t k = static_cast<size_t>(kind);
  return index >= 1 && index <= presentation_->count(kind) &&
         assigned_[k][static_cast<size_t>(index) - 1];
}

const UnitQuaternion& Representation::image(Gen kind, int index) const {
  if (!assigned(kind, index)) {
    raise(ErrorCode::UnassignedGenerator,
          std::string(1, gen_letter(kind)) + std::to_string(index) + " has no image");
  }
  return images_[static_cast<size_t>(kind)][static_cast<size_t>(index) - 1];
}

Representation Representation::conjugated(const UnitQuaternion& g) const {
  Representation out(presentation_);
  UnitQuaternion gi = g.inverse();
  for (size_t k = 0; k < 3; ++k) {
    for (size_t m = 0; m < images_[k].size(); ++m) {
      if (assigned_[k][m]) {
        out.set(static_cast<Gen>(k), static_cast<int>(m) + 1, g * images_[k][m] * gi);
      }
    }
  }
  return out;
}

UnitQuaternion evaluate_word(const Representation& rep, const GeneratorWord& word) {
  UnitQuaternion acc;
  for (const Letter& l : word.letters()) {
    const UnitQuaternion& q = rep.image(l.kind, l.index);
    acc = acc * (l.exponent == 1 ? q : q.inverse());
  }
  return acc;
}

Residual residual(const Representation& rep) {
  Residual out;
  for (const GeneratorWord& relator : rep.presentation().relators) {
    Quat w = evaluate_word(rep, relator).value();
    double dev = (w - Quat{1, 0, 0, 0}).norm();
    out.per_relator.push_back(dev);
    out.max = std::max(out.max, dev);
  }
  return out;
}

std::vector<double> probe(const Representation& rep, const std::vector<GeneratorWord>& words) {
  std::vector<double> out;
  out.reserve(words.size());
  for (const GeneratorWord& w : words) {
    out.push_back(trace(evaluate_word(rep, w)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projected gradient descent sampler

namespace {

struct CompiledLetter {
  int slot;
  int exponent;
};

struct DescentWorkspace {
  std::vector<std::vector<CompiledLetter>> relators;
  std::array<int, 3> offset{0, 0, 0};
  int slots = 0;
};

DescentWorkspace compile(const SurfacePresentation& p) {
  DescentWorkspace w;
  w.offset = {0, p.generator_counts[0], p.generator_counts[0] + p.generator_counts[1]};
  w.slots = p.generator_counts[0] + p.generator_counts[1] + p.generator_counts[2];
  for (const GeneratorWord& relator : p.relators) {
    std::vector<CompiledLetter> cw;
    for (const Letter& l : relator.letters()) {
      cw.push_back({w.offset[static_cast<size_t>(l.kind)] + l.index - 1, l.exponent});
    }
    w.relators.push_back(std::move(cw));
  }
  return w;
}

// Objective, per-relator deviations and (optionally) the euclidean gradient.
double objective(const DescentWorkspace& w, const std::vector<Quat>& q, double* max_dev,
                 std::vector<Quat>* grad) {
  if (grad) std::fill(grad->begin(), grad->end(), Quat{});
  double F = 0.0;
  double worst = 0.0;
  std::vector<Quat> pref, suf;
  for (const auto& relator : w.relators) {
    size_t L = relator.size();
    pref.assign(L + 1, Quat{1, 0, 0, 0});
    for (size_t k = 0; k < L; ++k) {
      const Quat& g = q[static_cast<size_t>(relator[k].slot)];
      pref[k + 1] = pref[k] * (relator[k].exponent == 1 ? g : g.conj());
    }
    Quat dev = pref[L] - Quat{1, 0, 0, 0};
    double f = dev.norm_sq();
    F += f;
    worst = std::max(worst, std::sqrt(f));
    if (!grad) continue;
    suf.assign(L + 1, Quat{1, 0, 0, 0});
    for (size_t k = L; k-- > 0;) {
      const Quat& g = q[static_cast<size_t>(relator[k].slot)];
      suf[k] = (relator[k].exponent == 1 ? g : g.conj()) * suf[k + 1];
    }
    Quat r2 = dev * 2.0;
    for (size_t k = 0; k < L; ++k) {
      Quat contrib = pref[k].conj() * r2 * suf[k + 1].conj();
      if (relator[k].exponent == -1) contrib = contrib.conj();
      Quat& slot = (*grad)[static_cast<size_t>(relator[k].slot)];
      slot = slot + contrib;
    }
  }
  if (max_dev) *max_dev = worst;
  return F;
}

}  // namespace

Representation sample_descent(const SurfacePresentation& presentation, RandomStream& rng,
                              double tol, int max_iter) {
  auto shared = std::make_shared<SurfacePresentation>(presentation);
  DescentWorkspace w = compile(presentation);

  std::vector<Quat> q(static_cast<size_t>(w.slots));
  for (auto& g : q) g = haar(rng).value();

  std::vector<Quat> grad(q.size()), rgrad(q.size()), trial(q.size());
  double step = 0.25;
  double max_dev = 0.0;
  double F = objective(w, q, &max_dev, &grad);
  int iter = 0;
  for (; iter < max_iter && max_dev > tol; ++iter) {
    double gnorm2 = 0.0;
    for (size_t s = 0; s < q.size(); ++s) {
      rgrad[s] = grad[s] - q[s] * inner(grad[s], q[s]);
      gnorm2 += rgrad[s].norm_sq();
    }
    if (gnorm2 < 1e-300) break;  // critical point

    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (size_t s = 0; s < q.size(); ++s) {
        Quat t = q[s] - rgrad[s] * step;
        trial[s] = t * (1.0 / t.norm());
      }
      double trial_dev = 0.0;
      double Ft = objective(w, trial, &trial_dev, nullptr);
      if (Ft <= F - 1e-4 * step * gnorm2) {
        q.swap(trial);
        F = Ft;
        max_dev = trial_dev;
        step = std::min(step * 1.3, 1.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search floor, no further progress
    F = objective(w, q, &max_dev, &grad);
  }

  if (max_dev > 10.0 * tol) {
    raise(ErrorCode::NoConvergence,
          "descent stalled at residual " + std::to_string(max_dev) + " after " +
              std::to_string(iter) + " iterations");
  }

  Representation rep(shared);
  for (size_t s = 0; s < q.size(); ++s) {
    Gen kind = s < static_cast<size_t>(w.offset[1]) ? Gen::a
               : s < static_cast<size_t>(w.offset[2]) ? Gen::b
                                                      : Gen::c;
    int index = static_cast<int>(s) - w.offset[static_cast<size_t>(kind)] + 1;
    rep.set(kind, index, UnitQuaternion(q[s]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cycle propagation sampler

namespace {

// Boundary holonomies of the cut along a vertical cylinder, based at
// cycle[start]: L follows the column itself, R the column of right-hand
// neighbors. The gluing forces them conjugate, hence equal traces.
struct BoundaryPair {
  UnitQuaternion left, right;
};

BoundaryPair boundary_holonomies(const std::vector<UnitQuaternion>& A, const Permutation& sigma,
                                 const std::vector<int>& cycle, size_t start) {
  UnitQuaternion L, R;
  for (size_t m = 0; m < cycle.size(); ++m) {
    int i = cycle[(start + m) % cycle.size()];
    L = L * A[static_cast<size_t>(i) - 1];
    R = R * A[static_cast<size_t>(sigma.apply(i)) - 1];
  }
  return {L, R};
}

// Affine form of tr(L) - tr(R) as a function of A_j alone:
// value = <g, A_j> + c.
struct TraceForm {
  Quat g;
  double c = 0.0;
};

TraceForm trace_form(const std::vector<UnitQuaternion>& A, const Permutation& sigma,
                     const std::vector<int>& cycle, int j) {
  size_t k = cycle.size();
  size_t jpos = 0;
  while (cycle[jpos] != j) ++jpos;

  // Base the cycle at j, so L = A_j * Y and tr(L) = 2 <A_j, conj(Y)>.
  UnitQuaternion Y;
  for (size_t m = 1; m < k; ++m) {
    Y = Y * A[static_cast<size_t>(cycle[(jpos + m) % k]) - 1];
  }
  TraceForm form;
  form.g = Y.value().conj() * 2.0;

  // R based at j; A_j occurs there iff sigma^-1(j) lies in this cycle.
  long occurrence = -1;
  for (size_t m = 0; m < k; ++m) {
    if (sigma.apply(cycle[(jpos + m) % k]) == j) occurrence = static_cast<long>(m);
  }
  if (occurrence < 0) {
    UnitQuaternion R;
    for (size_t m = 0; m < k; ++m) {
      R = R * A[static_cast<size_t>(sigma.apply(cycle[(jpos + m) % k])) - 1];
    }
    form.c = -trace(R);
  } else {
    UnitQuaternion X, Yr;
    for (size_t m = 0; m < k; ++m) {
      if (static_cast<long>(m) == occurrence) continue;
      const UnitQuaternion& f = A[static_cast<size_t>(sigma.apply(cycle[(jpos + m) % k])) - 1];
      if (static_cast<long>(m) < occurrence) {
        X = X * f;
      } else {
        Yr = Yr * f;
      }
    }
    // tr(X A_j Y) = 2 <A_j, conj(Y X)>
    form.g = form.g - (Yr * X).value().conj() * 2.0;
  }
  return form;
}

}  // namespace

Representation sample_propagate(const Origami& origami, RandomStream& rng) {
  origami.validate();
  const Permutation& sigma = origami.sigma();
  const Permutation& sigma_prime = origami.sigma_prime();
  int d = origami.square_count();

  std::vector<UnitQuaternion> A;
  A.reserve(static_cast<size_t>(d));
  for (int i = 1; i <= d; ++i) A.push_back(haar(rng));

  std::vector<Cylinder> vcyls = origami.cylinders(Direction::vertical);

  // One trace repair per cylinder. The repaired coordinate of one cycle
  // can enter the neighbor column of another, so sweep until all trace
  // equations hold; the free transverse component is drawn once and
  // reused so the sweep is a deterministic fixed-point iteration.
  std::vector<int> designated(vcyls.size(), 0);
  std::vector<Quat> free_component(vcyls.size());
  std::vector<char> have_free(vcyls.size(), 0);

  const int max_sweeps = 64;
  bool settled = false;
  for (int sweep = 0; sweep < max_sweeps && !settled; ++sweep) {
    settled = true;
    for (size_t ci = 0; ci < vcyls.size(); ++ci) {
      const std::vector<int>& cycle = vcyls[ci].cycle;
      BoundaryPair bp = boundary_holonomies(A, sigma, cycle, 0);
      double mismatch = trace(bp.left) - trace(bp.right);
      if (std::abs(mismatch) <= 5e-14) continue;
      settled = false;

      bool repaired = false;
      for (size_t attempt = 0; attempt < cycle.size(); ++attempt) {
        int j = cycle[(static_cast<size_t>(designated[ci]) + attempt) % cycle.size()];
        TraceForm form = trace_form(A, sigma, cycle, j);
        double gnorm = form.g.norm();
        if (gnorm < 1e-6) continue;
        designated[ci] = static_cast<int>((static_cast<size_t>(designated[ci]) + attempt) %
                                          cycle.size());
        Quat ghat = form.g * (1.0 / gnorm);
        double alpha = std::clamp(-form.c / gnorm, -1.0, 1.0);
        if (!have_free[ci]) {
          free_component[ci] = haar(rng).value();
          have_free[ci] = 1;
        }
        Quat perp = free_component[ci] - ghat * inner(free_component[ci], ghat);
        if (perp.norm() < 1e-6) {
          free_component[ci] = haar(rng).value();
          perp = free_component[ci] - ghat * inner(free_component[ci], ghat);
        }
        perp = perp * (std::sqrt(std::max(0.0, 1.0 - alpha * alpha)) / perp.norm());
        A[static_cast<size_t>(j) - 1] = UnitQuaternion(ghat * alpha + perp);
        repaired = true;
        break;
      }
      if (!repaired) {
        raise(ErrorCode::DegenerateCycle,
              "trace repair degenerate on cylinder through square " + std::to_string(cycle[0]) +
                  " (mismatch " + std::to_string(mismatch) + ")");
      }
    }
  }
  for (size_t ci = 0; ci < vcyls.size(); ++ci) {
    BoundaryPair bp = boundary_holonomies(A, sigma, vcyls[ci].cycle, 0);
    if (std::abs(trace(bp.left) - trace(bp.right)) > 1e-11) {
      raise(ErrorCode::DegenerateCycle, "trace repair sweeps did not settle");
    }
  }

  auto presentation = std::make_shared<SurfacePresentation>(origami.square_relators());
  Representation rep(presentation);
  for (int i = 1; i <= d; ++i) rep.set(Gen::a, i, A[static_cast<size_t>(i) - 1]);

  // Free circle datum per cylinder, then propagate around the cycle.
  for (const Cylinder& cyl : vcyls) {
    BoundaryPair bp = boundary_holonomies(A, sigma, cyl.cycle, 0);
    double angle = rng.uniform(0.0, 6.283185307179586476925286766559);
    UnitQuaternion B0;
    if (bp.right.distance_to_center() < kCentralTol) {
      B0 = haar(rng);
    } else {
      B0 = conj_solve(bp.right, bp.left, angle);
    }
    int i = cyl.cycle[0];
    UnitQuaternion B = B0;
    rep.set(Gen::b, i, B);
    for (int m = 0; m + 1 < cyl.circumference(); ++m) {
      B = A[static_cast<size_t>(i) - 1].inverse() * B * A[static_cast<size_t>(sigma.apply(i)) - 1];
      i = sigma_prime.apply(i);
      rep.set(Gen::b, i, B);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constructive n4 sampler

namespace {

// Completes two orthonormal vectors to a positively oriented orthonormal
// basis of R^4 (columns of the result).
Eigen::Matrix4d complete_frame(const Eigen::Vector4d& u1, const Eigen::Vector4d& u2) {
  Eigen::Matrix4d frame;
  frame.col(0) = u1;
  frame.col(1) = u2;
  int filled = 2;
  for (int e = 0; e < 4 && filled < 4; ++e) {
    Eigen::Vector4d cand = Eigen::Vector4d::Unit(e);
    for (int k = 0; k < filled; ++k) cand -= frame.col(k).dot(cand) * frame.col(k);
    if (cand.norm() > 0.5) {
      frame.col(filled++) = cand.normalized();
    }
  }
  if (filled < 4) {
    // the axis candidates were nearly dependent; orthogonalize the rest
    for (int e = 0; e < 4 && filled < 4; ++e) {
      Eigen::Vector4d cand = Eigen::Vector4d::Unit(e);
      for (int k = 0; k < filled; ++k) cand -= frame.col(k).dot(cand) * frame.col(k);
      if (cand.norm() > 1e-6) frame.col(filled++) = cand.normalized();
    }
  }
  return frame;
}

}  // namespace

Representation sample_n4(const UnitQuaternion& a1, const UnitQuaternion& a2, RandomStream& rng) {
  // Sphere condition on B1: tr(X a1^-1) = tr(a1 X a2^-2), both sides
  // linear in X, normal direction a1 - conj(a2^-2 a1).
  Quat normal = a1.value() - (a2.pow(-2) * a1).value().conj();

  UnitQuaternion b1;
  bool found = false;
  for (int attempt = 0; attempt < 64 && !found; ++attempt) {
    b1 = normal.norm() < 1e-9 ? haar(rng) : haar_orthogonal(rng, normal);
    if (std::abs(inner(a1.value(), b1.value())) <= 1.0 - 1e-6) found = true;
  }
  if (!found) {
    raise(ErrorCode::DegenerateSphere, "no admissible B1 off the axis of A1");
  }
  UnitQuaternion b2 = a1 * b1 * a2.inverse();

  // Orientation-preserving isometry with Phi(A1) = A2, Phi(B1) = B2; it
  // exists because the pairs have equal Gram matrices.
  Eigen::Vector4d u1 = a1.value().vec();
  double cu = inner(a1.value(), b1.value());
  Eigen::Vector4d u2 = (b1.value() - a1.value() * cu).vec().normalized();
  Eigen::Vector4d v1 = a2.value().vec();
  double cv = inner(a2.value(), b2.value());
  Eigen::Vector4d v2 = (b2.value() - a2.value() * cv).vec().normalized();

  Eigen::Matrix4d U = complete_frame(u1, u2);
  Eigen::Matrix4d V = complete_frame(v1, v2);
  if (U.determinant() * V.determinant() < 0.0) U.col(3) = -U.col(3);
  Eigen::Matrix4d phi = V * U.transpose();

  auto [p, q] = so4_factor(Isometry4::from_matrix(phi));
  UnitQuaternion c2 = p.inverse();
  UnitQuaternion c1 = q;

  Representation rep(std::make_shared<SurfacePresentation>(registry("n4").presentation));
  rep.set(Gen::a, 1, a1);
  rep.set(Gen::a, 2, a2);
  rep.set(Gen::b, 1, b1);
  rep.set(Gen::b, 2, b2);
  rep.set(Gen::c, 1, c1);
  rep.set(Gen::c, 2, c2);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize(const Representation& rep) {
  const SurfacePresentation& p = rep.presentation();
  std::ostringstream os;
  os << "twistlab-representation 1\n";
  os << "presentation " << p.name << "\n";
  os << "counts " << p.generator_counts[0] << ' ' << p.generator_counts[1] << ' '
     << p.generator_counts[2] << "\n";
  if (!p.sigma_text.empty()) {
    os << "sigma " << p.sigma_text << "\n";
    os << "sigma-prime " << p.sigma_prime_text << "\n";
  }
  char buf[128];
  for (Gen kind : {Gen::a, Gen::b, Gen::c}) {
    for (int i = 1; i <= p.count(kind); ++i) {
      const Quat& q = rep.image(kind, i).value();
      std::snprintf(buf, sizeof buf, "%c %d %.17g %.17g %.17g %.17g\n", gen_letter(kind), i, q.w,
                    q.x, q.y, q.z);
      os << buf;
    }
  }
  return os.str();
}

Representation deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "twistlab-representation" || version != 1) {
    raise(ErrorCode::ParseError, "bad representation header");
  }
  std::string keyword, name;
  if (!(is >> keyword >> name) || keyword != "presentation") {
    raise(ErrorCode::ParseError, "expected presentation line");
  }
  std::array<int, 3> counts{};
  if (!(is >> keyword >> counts[0] >> counts[1] >> counts[2]) || keyword != "counts") {
    raise(ErrorCode::ParseError, "expected counts line");
  }
  is >> std::ws;
  std::string sigma_text, sigma_prime_text;
  if (is.peek() == 's') {
    std::string line;
    std::getline(is, line);
    if (line.rfind("sigma ", 0) != 0) raise(ErrorCode::ParseError, "expected sigma line");
    sigma_text = line.substr(6);
    std::getline(is, line);
    if (line.rfind("sigma-prime ", 0) != 0) {
      raise(ErrorCode::ParseError, "expected sigma-prime line");
    }
    sigma_prime_text = line.substr(12);
  }

  std::shared_ptr<const SurfacePresentation> presentation;
  bool known = false;
  for (const std::string& n : registry_names()) {
    if (n == name) known = true;
  }
  if (known) {
    presentation = std::make_shared<SurfacePresentation>(registry(name).presentation);
  } else if (!sigma_text.empty()) {
    SurfacePresentation p = Origami::parse(sigma_text, sigma_prime_text).square_relators();
    p.name = name;
    presentation = std::make_shared<SurfacePresentation>(std::move(p));
  } else {
    SurfacePresentation p;
    p.name = name;
    p.generator_counts = counts;
    presentation = std::make_shared<SurfacePresentation>(std::move(p));
  }
  if (presentation->generator_counts != counts) {
    raise(ErrorCode::ParseError, "generator counts do not match presentation " + name);
  }

  Representation rep(presentation);
  char kind_letter;
  int index;
  Quat q;
  while (is >> kind_letter >> index >> q.w >> q.x >> q.y >> q.z) {
    if (kind_letter != 'a' && kind_letter != 'b' && kind_letter != 'c') {
      raise(ErrorCode::ParseError, std::string("unknown generator family '") + kind_letter + "'");
    }
    Gen kind = kind_letter == 'a' ? Gen::a : kind_letter == 'b' ? Gen::b : Gen::c;
    rep.set(kind, index, UnitQuaternion::from_unit(q, 1e-12));
  }
  return rep;
}

}  // namespace twistlab
