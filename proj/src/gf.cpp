#include "fglab/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace fglab {

namespace {

using Poly = std::vector<uint8_t>;  // little-endian coefficients mod p

int deg(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[static_cast<size_t>(i)]) return i;
  return -1;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, int p) {
  int n = deg(f);
  Poly r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<uint8_t>((r[i + j] + a[i] * b[j]) % p);
  }
  // reduce mod monic f
  for (int d = static_cast<int>(r.size()) - 1; d >= n; --d) {
    uint8_t c = r[static_cast<size_t>(d)];
    if (!c) continue;
    r[static_cast<size_t>(d)] = 0;
    for (int k = 0; k < n; ++k) {
      int idx = d - n + k;
      int v = r[static_cast<size_t>(idx)] - c * f[static_cast<size_t>(k)];
      r[static_cast<size_t>(idx)] = static_cast<uint8_t>(((v % p) + p) % p);
    }
  }
  r.resize(static_cast<size_t>(n));
  return r;
}

Poly poly_powmod_x(uint64_t e, const Poly& f, int p) {
  // x^e mod f by square-and-multiply
  int n = deg(f);
  Poly base(static_cast<size_t>(n), 0);
  if (n == 1) {
    // x mod f is a constant
    base.assign(1, 0);
    base[0] = static_cast<uint8_t>((p - f[0]) % p);
    base.resize(1);
  } else {
    base[1] = 1;
  }
  Poly acc(static_cast<size_t>(std::max(n, 1)), 0);
  acc[0] = 1;
  while (e) {
    if (e & 1) acc = poly_mulmod(acc, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return acc;
}

Poly poly_mod(Poly a, const Poly& f, int p) {
  int n = deg(f);
  for (int d = static_cast<int>(a.size()) - 1; d >= n; --d) {
    uint8_t c = a[static_cast<size_t>(d)];
    if (!c) continue;
    a[static_cast<size_t>(d)] = 0;
    for (int k = 0; k < n; ++k) {
      int idx = d - n + k;
      int v = a[static_cast<size_t>(idx)] - c * f[static_cast<size_t>(k)];
      a[static_cast<size_t>(idx)] = static_cast<uint8_t>(((v % p) + p) % p);
    }
  }
  a.resize(static_cast<size_t>(std::max(n, 0)));
  return a;
}

int inv_mod_p(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  int r = 1;
  for (int e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, int p) {
  while (deg(b) >= 0) {
    // a mod b with b made monic
    int db = deg(b);
    int lead_inv = inv_mod_p(b[static_cast<size_t>(db)], p);
    Poly bm(b.begin(), b.begin() + db + 1);
    for (auto& c : bm) c = static_cast<uint8_t>(c * lead_inv % p);
    a = poly_mod(std::move(a), bm, p);
    a.resize(static_cast<size_t>(std::max(db, 1)));
    std::swap(a, b);
  }
  return a;
}

bool poly_is_irreducible(const Poly& f, int p) {
  int n = deg(f);
  if (n < 1) return false;
  // x^{p^n} == x mod f, and gcd(x^{p^{n/l}} - x, f) = 1 for prime l | n
  uint64_t pn = 1;
  for (int i = 0; i < n; ++i) pn *= static_cast<uint64_t>(p);
  Poly xp = poly_powmod_x(pn, f, p);
  Poly x(static_cast<size_t>(std::max(n, 2)), 0);
  if (n == 1)
    x = poly_mod({0, 1}, f, p);
  else
    x[1] = 1;
  x.resize(static_cast<size_t>(n));
  xp.resize(static_cast<size_t>(n));
  if (xp != x) return false;
  for (int l = 2; l <= n; ++l) {
    if (n % l) continue;
    bool lp = true;
    for (int d = 2; d * d <= l; ++d)
      if (l % d == 0) { lp = false; break; }
    if (!lp) continue;
    uint64_t e = 1;
    for (int i = 0; i < n / l; ++i) e *= static_cast<uint64_t>(p);
    Poly g = poly_powmod_x(e, f, p);
    g.resize(static_cast<size_t>(n));
    // g - x
    for (int i = 0; i < n; ++i) {
      int v = g[static_cast<size_t>(i)] - x[static_cast<size_t>(i)];
      g[static_cast<size_t>(i)] = static_cast<uint8_t>(((v % p) + p) % p);
    }
    Poly d = poly_gcd(f, g, p);
    if (deg(d) != 0) return false;
  }
  return true;
}

std::mutex g_pool_mutex;
std::map<std::pair<std::pair<int, int>, std::vector<uint8_t>>,
         std::unique_ptr<FieldSpec>>* g_pool = nullptr;

const FieldSpec* intern(int p, int n, std::vector<uint8_t> modulus) {
  std::lock_guard<std::mutex> lock(g_pool_mutex);
  if (!g_pool)
    g_pool = new std::map<std::pair<std::pair<int, int>, std::vector<uint8_t>>,
                          std::unique_ptr<FieldSpec>>();
  auto key = std::make_pair(std::make_pair(p, n), modulus);
  auto it = g_pool->find(key);
  if (it != g_pool->end()) return it->second.get();
  auto spec = std::make_unique<FieldSpec>(FieldSpec::Key{}, p, n, std::move(modulus));
  const FieldSpec* raw = spec.get();
  (*g_pool)[key] = std::move(spec);
  return raw;
}

}  // namespace

bool is_small_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

FieldSpec::FieldSpec(int p, int n, std::vector<uint8_t> modulus)
    : p_(p), n_(n), modulus_(std::move(modulus)) {
  q_ = 1;
  for (int i = 0; i < n_; ++i) q_ *= static_cast<uint64_t>(p_);
  build_tables();
}

void FieldSpec::build_tables() {
  // x^{n+k} mod f for k = 0..n-2
  red_.assign(static_cast<size_t>(std::max(n_ - 1, 0)), {});
  Poly cur(static_cast<size_t>(n_), 0);  // x^n mod f = -f_low
  for (int i = 0; i < n_; ++i)
    cur[static_cast<size_t>(i)] =
        static_cast<uint8_t>((p_ - modulus_[static_cast<size_t>(i)]) % p_);
  for (int k = 0; k + 1 < n_; ++k) {
    for (int i = 0; i < n_; ++i) red_[static_cast<size_t>(k)][static_cast<size_t>(i)] = cur[static_cast<size_t>(i)];
    // multiply by x
    uint8_t top = cur[static_cast<size_t>(n_ - 1)];
    for (int i = n_ - 1; i > 0; --i) cur[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
    cur[0] = 0;
    if (top) {
      for (int i = 0; i < n_; ++i) {
        int v = cur[static_cast<size_t>(i)] +
                top * ((p_ - modulus_[static_cast<size_t>(i)]) % p_);
        cur[static_cast<size_t>(i)] = static_cast<uint8_t>(v % p_);
      }
    }
  }
  // Frobenius matrix: coords of (x^i)^p
  frob_ = {};
  for (int i = 0; i < n_; ++i) {
    Poly xi = poly_powmod_x(static_cast<uint64_t>(i) * static_cast<uint64_t>(p_),
                            modulus_, p_);
    xi.resize(static_cast<size_t>(n_));
    for (int j = 0; j < n_; ++j) frob_[static_cast<size_t>(i)][static_cast<size_t>(j)] = xi[static_cast<size_t>(j)];
  }
}

const FieldSpec* FieldSpec::get(int p, int n) {
  if (!is_small_prime(p)) throw std::invalid_argument("FieldSpec: p must be prime");
  if (n < 1 || n > Fq::kMaxDeg) throw std::invalid_argument("FieldSpec: need 1 <= n <= 8");
  // lexicographically least monic irreducible, constant term up
  std::vector<uint8_t> f(static_cast<size_t>(n + 1), 0);
  f[static_cast<size_t>(n)] = 1;
  uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<uint64_t>(p);
  for (uint64_t k = 0; k < total; ++k) {
    uint64_t v = k;
    for (int i = 0; i < n; ++i) {
      f[static_cast<size_t>(i)] = static_cast<uint8_t>(v % static_cast<uint64_t>(p));
      v /= static_cast<uint64_t>(p);
    }
    if (poly_is_irreducible(f, p)) return intern(p, n, f);
  }
  throw std::logic_error("FieldSpec: no irreducible polynomial found");
}

const FieldSpec* FieldSpec::get(int p, int n, const std::vector<int>& modulus) {
  if (!is_small_prime(p)) throw std::invalid_argument("FieldSpec: p must be prime");
  if (n < 1 || n > Fq::kMaxDeg) throw std::invalid_argument("FieldSpec: need 1 <= n <= 8");
  if (modulus.size() != static_cast<size_t>(n + 1))
    throw std::invalid_argument("FieldSpec: modulus must have degree n");
  std::vector<uint8_t> f(static_cast<size_t>(n + 1));
  for (size_t i = 0; i < f.size(); ++i) {
    int c = ((modulus[i] % p) + p) % p;
    f[i] = static_cast<uint8_t>(c);
  }
  if (f[static_cast<size_t>(n)] != 1)
    throw std::invalid_argument("FieldSpec: modulus must be monic");
  if (!poly_is_irreducible(f, p))
    throw std::invalid_argument("FieldSpec: modulus is reducible over F_p");
  return intern(p, n, f);
}

Fq FieldSpec::element(const std::vector<int>& coords) const {
  if (coords.size() != static_cast<size_t>(n_))
    throw std::invalid_argument("FieldSpec::element: coordinate vector length != n");
  std::array<uint8_t, Fq::kMaxDeg> c{};
  for (int i = 0; i < n_; ++i)
    c[static_cast<size_t>(i)] = static_cast<uint8_t>(((coords[static_cast<size_t>(i)] % p_) + p_) % p_);
  return Fq(this, c);
}

Fq FieldSpec::from_int(long v) const {
  std::array<uint8_t, Fq::kMaxDeg> c{};
  long r = ((v % p_) + p_) % p_;
  c[0] = static_cast<uint8_t>(r);
  return Fq(this, c);
}

Fq FieldSpec::gen() const {
  if (n_ < 2) throw std::invalid_argument("FieldSpec::gen: prime field has no basis generator");
  std::array<uint8_t, Fq::kMaxDeg> c{};
  c[1] = 1;
  return Fq(this, c);
}

Fq FieldSpec::element_by_index(uint64_t k) const {
  std::array<uint8_t, Fq::kMaxDeg> c{};
  for (int i = 0; i < n_; ++i) {
    c[static_cast<size_t>(i)] = static_cast<uint8_t>(k % static_cast<uint64_t>(p_));
    k /= static_cast<uint64_t>(p_);
  }
  return Fq(this, c);
}

std::vector<int> Fq::coords() const {
  std::vector<int> v(static_cast<size_t>(spec_->n()));
  for (int i = 0; i < spec_->n(); ++i) v[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)];
  return v;
}

static void check_same(const Fq& a, const Fq& b) {
  if (a.spec_ptr() != b.spec_ptr())
    throw std::invalid_argument("Fq: operands belong to different fields");
}

Fq Fq::operator+(const Fq& o) const {
  check_same(*this, o);
  int p = spec_->p();
  std::array<uint8_t, kMaxDeg> r{};
  for (int i = 0; i < spec_->n(); ++i)
    r[static_cast<size_t>(i)] = static_cast<uint8_t>((c_[static_cast<size_t>(i)] + o.c_[static_cast<size_t>(i)]) % p);
  return Fq(spec_, r);
}

Fq Fq::operator-(const Fq& o) const {
  check_same(*this, o);
  int p = spec_->p();
  std::array<uint8_t, kMaxDeg> r{};
  for (int i = 0; i < spec_->n(); ++i)
    r[static_cast<size_t>(i)] = static_cast<uint8_t>((c_[static_cast<size_t>(i)] + p - o.c_[static_cast<size_t>(i)]) % p);
  return Fq(spec_, r);
}

Fq Fq::operator-() const {
  int p = spec_->p();
  std::array<uint8_t, kMaxDeg> r{};
  for (int i = 0; i < spec_->n(); ++i)
    r[static_cast<size_t>(i)] = static_cast<uint8_t>((p - c_[static_cast<size_t>(i)]) % p);
  return Fq(spec_, r);
}

Fq Fq::operator*(const Fq& o) const {
  check_same(*this, o);
  const int p = spec_->p();
  const int n = spec_->n();
  if (n == 1) {
    std::array<uint8_t, kMaxDeg> r{};
    r[0] = static_cast<uint8_t>(c_[0] * o.c_[0] % p);
    return Fq(spec_, r);
  }
  int prod[2 * kMaxDeg] = {};
  for (int i = 0; i < n; ++i) {
    if (!c_[static_cast<size_t>(i)]) continue;
    for (int j = 0; j < n; ++j)
      prod[i + j] += c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
  }
  std::array<uint8_t, kMaxDeg> r{};
  for (int i = 0; i < n; ++i) r[static_cast<size_t>(i)] = static_cast<uint8_t>(prod[i] % p);
  for (int k = 0; k + 1 < n; ++k) {
    int c = prod[n + k] % p;
    if (!c) continue;
    const auto& row = spec_->red_[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i)
      r[static_cast<size_t>(i)] = static_cast<uint8_t>((r[static_cast<size_t>(i)] + c * row[static_cast<size_t>(i)]) % p);
  }
  return Fq(spec_, r);
}

Fq Fq::inv() const {
  if (is_zero()) throw std::domain_error("Fq::inv: zero has no inverse");
  return pow(spec_->q() - 2);
}

Fq Fq::pow(uint64_t e) const {
  Fq acc = spec_->one();
  Fq base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Fq Fq::frobenius(int r) const {
  const int n = spec_->n();
  r %= n;
  if (r < 0) r += n;
  Fq cur = *this;
  const int p = spec_->p();
  for (int step = 0; step < r; ++step) {
    std::array<uint8_t, kMaxDeg> out{};
    for (int i = 0; i < n; ++i) {
      if (!cur.c_[static_cast<size_t>(i)]) continue;
      const auto& row = spec_->frob_[static_cast<size_t>(i)];
      for (int j = 0; j < n; ++j)
        out[static_cast<size_t>(j)] = static_cast<uint8_t>(
            (out[static_cast<size_t>(j)] + cur.c_[static_cast<size_t>(i)] * row[static_cast<size_t>(j)]) % p);
    }
    cur = Fq(spec_, out);
  }
  return cur;
}

bool Fq::in_subfield(int m) const {
  if (m < 1 || spec_->n() % m != 0)
    throw std::invalid_argument("Fq::in_subfield: m must divide n");
  return frobenius(m) == *this;
}

std::string Fq::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < spec_->n(); ++i) {
    if (i) os << ",";
    os << static_cast<int>(c_[static_cast<size_t>(i)]);
  }
  os << "]";
  return os.str();
}

}  // namespace fglab
