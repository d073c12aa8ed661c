#include <linf/series.hpp>

#include <linf/graded.hpp>

#include <algorithm>
#include <functional>

namespace linf {

int total_degree(const MultiIndex& i) {
  int d = 0;
  for (int e : i) d += e;
  return d;
}

TruncatedSeries::TruncatedSeries(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 0 || order < 0) throw validation_error("series: bad shape");
}

TruncatedSeries TruncatedSeries::variable(int nvars, int order, int i) {
  TruncatedSeries s(nvars, order);
  MultiIndex m(nvars, 0);
  m[i] = 1;
  s.set_coeff(m, rat(1));
  return s;
}

TruncatedSeries TruncatedSeries::constant(int nvars, int order, const Rational& c) {
  TruncatedSeries s(nvars, order);
  s.set_coeff(MultiIndex(nvars, 0), c);
  return s;
}

Rational TruncatedSeries::coeff(const MultiIndex& i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? rat(0) : it->second;
}

void TruncatedSeries::set_coeff(const MultiIndex& i, const Rational& c) {
  if (static_cast<int>(i.size()) != nvars_) throw validation_error("series: bad multi-index");
  if (total_degree(i) > order_) return;
  if (c == 0)
    coeffs_.erase(i);
  else
    coeffs_[i] = c;
}

void TruncatedSeries::add_coeff(const MultiIndex& i, const Rational& c) { set_coeff(i, coeff(i) + c); }

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  if (nvars_ != o.nvars_ || order_ != o.order_) throw validation_error("series sum: shape mismatch");
  TruncatedSeries out = *this;
  for (const auto& [i, c] : o.coeffs_) out.add_coeff(i, c);
  return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const { return *this + o.scaled(rat(-1)); }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  if (nvars_ != o.nvars_ || order_ != o.order_) throw validation_error("series product: shape mismatch");
  TruncatedSeries out(nvars_, order_);
  for (const auto& [i, c] : coeffs_) {
    const int di = total_degree(i);
    for (const auto& [j, d] : o.coeffs_) {
      if (di + total_degree(j) > order_) continue;
      MultiIndex k(nvars_);
      for (int t = 0; t < nvars_; ++t) k[t] = i[t] + j[t];
      out.add_coeff(k, c * d);
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const Rational& c) const {
  TruncatedSeries out(nvars_, order_);
  if (c == 0) return out;
  for (const auto& [i, v] : coeffs_) out.set_coeff(i, v * c);
  return out;
}

TruncatedSeries TruncatedSeries::homogeneous_part(int k) const {
  TruncatedSeries out(nvars_, order_);
  for (const auto& [i, c] : coeffs_)
    if (total_degree(i) == k) out.set_coeff(i, c);
  return out;
}

std::optional<int> TruncatedSeries::multiplicity() const {
  std::optional<int> best;
  for (const auto& [i, c] : coeffs_) {
    (void)c;
    const int d = total_degree(i);
    if (!best || d < *best) best = d;
  }
  return best;
}

TruncatedSeries TruncatedSeries::derivative(int var) const {
  TruncatedSeries out(nvars_, order_);
  for (const auto& [i, c] : coeffs_) {
    if (i[var] == 0) continue;
    MultiIndex j = i;
    j[var] -= 1;
    out.add_coeff(j, c * i[var]);
  }
  return out;
}

TruncatedSeries TruncatedSeries::substitute(const std::vector<TruncatedSeries>& images) const {
  if (static_cast<int>(images.size()) != nvars_) throw validation_error("substitute: wrong image count");
  for (const auto& im : images)
    if (im.coeff(MultiIndex(im.nvars(), 0)) != 0)
      throw validation_error("substitute: images must have zero constant term");
  const int out_vars = images.empty() ? nvars_ : images[0].nvars();
  const int out_order = images.empty() ? order_ : images[0].order();
  // powers[v][e] = images[v]^e, lazily grown
  std::vector<std::vector<TruncatedSeries>> powers(nvars_);
  for (int v = 0; v < nvars_; ++v) powers[v].push_back(TruncatedSeries::constant(out_vars, out_order, rat(1)));
  auto power = [&](int v, int e) -> const TruncatedSeries& {
    while (static_cast<int>(powers[v].size()) <= e) powers[v].push_back(powers[v].back() * images[v]);
    return powers[v][e];
  };
  TruncatedSeries out(out_vars, out_order);
  for (const auto& [i, c] : coeffs_) {
    TruncatedSeries term = TruncatedSeries::constant(out_vars, out_order, c);
    for (int v = 0; v < nvars_; ++v)
      if (i[v] > 0) term = term * power(v, i[v]);
    out = out + term;
  }
  return out;
}

TruncatedSeries TruncatedSeries::with_order(int new_order) const {
  TruncatedSeries out(nvars_, new_order);
  for (const auto& [i, c] : coeffs_) out.set_coeff(i, c);
  return out;
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const {
  return nvars_ == o.nvars_ && order_ == o.order_ && coeffs_ == o.coeffs_;
}

std::vector<MultiIndex> monomials_of_degree(int nvars, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex cur(nvars, 0);
  std::function<void(int, int)> rec = [&](int pos, int rest) {
    if (pos == nvars - 1) {
      cur[pos] = rest;
      out.push_back(cur);
      return;
    }
    for (int e = rest; e >= 0; --e) {
      cur[pos] = e;
      rec(pos + 1, rest - e);
    }
  };
  if (nvars == 0) {
    if (degree == 0) out.push_back({});
    return out;
  }
  rec(0, degree);
  return out;
}

std::string monomial_str(const MultiIndex& i, const std::vector<std::string>& var_names) {
  std::string s;
  for (size_t v = 0; v < i.size(); ++v) {
    if (i[v] == 0) continue;
    if (!s.empty()) s += "*";
    s += var_names[v];
    if (i[v] > 1) s += "^" + std::to_string(i[v]);
  }
  return s.empty() ? "1" : s;
}

std::string TruncatedSeries::str(const std::vector<std::string>& var_names) const {
  if (coeffs_.empty()) return "0";
  // graded-lex: by total degree, then lex on exponents
  std::vector<const std::pair<const MultiIndex, Rational>*> terms;
  for (const auto& kv : coeffs_) terms.push_back(&kv);
  std::stable_sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) {
    const int da = total_degree(a->first), db = total_degree(b->first);
    if (da != db) return da < db;
    return a->first < b->first;
  });
  std::string s;
  for (const auto* t : terms) {
    const Rational& c = t->second;
    const std::string mono = monomial_str(t->first, var_names);
    if (s.empty()) {
      if (mono == "1")
        s += to_string(c);
      else if (c == 1)
        s += mono;
      else if (c == -1)
        s += "-" + mono;
      else
        s += to_string(c) + "*" + mono;
    } else {
      const bool neg = c < 0;
      const Rational ac = neg ? Rational(-c) : c;
      s += neg ? " - " : " + ";
      if (mono == "1")
        s += to_string(ac);
      else if (ac == 1)
        s += mono;
      else
        s += to_string(ac) + "*" + mono;
    }
  }
  return s;
}

}  // namespace linf
