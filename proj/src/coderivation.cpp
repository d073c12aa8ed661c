#include <linf/coderivation.hpp>

#include <algorithm>
#include <functional>

namespace linf {

std::string SymWord::str(const GradedSpace& v) const {
  std::string s;
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) s += " ";
    s += v.name(letters[i]);
  }
  return s;
}

int word_degree(const SymWord& w, const GradedSpace& v) {
  int d = 0;
  for (int i : w.letters) d += v.degree(i);
  return d;
}

NormalizedWord normalize_word(std::vector<int> seq, const GradedSpace& v) {
  std::vector<int> degs(seq.size());
  for (size_t i = 0; i < seq.size(); ++i) degs[i] = v.degree(seq[i]);
  Rational sign = sort_with_koszul_sign(seq, degs);
  for (size_t i = 1; i < seq.size(); ++i)
    if (seq[i] == seq[i - 1] && (v.degree(seq[i]) & 1)) return {SymWord{}, rat(0)};
  return {SymWord{std::move(seq)}, sign};
}

std::vector<SymWord> enumerate_words(const GradedSpace& v, int length) {
  std::vector<SymWord> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(cur.size()) == length) {
      out.push_back(SymWord{cur});
      return;
    }
    for (int i = from; i < v.dim(); ++i) {
      if (!cur.empty() && cur.back() == i && (v.degree(i) & 1)) continue;
      cur.push_back(i);
      rec(i);
      cur.pop_back();
    }
  };
  if (length >= 0) rec(0);
  return out;
}

void add_to(WordCombo& c, const SymWord& w, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, fresh] = c.emplace(w, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second == 0) c.erase(it);
  }
}

MultiBracket::MultiBracket(GradedSpace source, GradedSpace target, int arity, int degree)
    : source_(std::move(source)), target_(std::move(target)), arity_(arity), degree_(degree) {
  if (arity < 0) throw validation_error("multibracket: negative arity");
}

bool MultiBracket::is_zero() const {
  for (const auto& [w, v] : entries_)
    if (!v.isZero(0)) return false;
  return true;
}

void MultiBracket::set(const SymWord& w, Vec value) {
  if (w.arity() != arity_) throw validation_error("multibracket: word arity mismatch");
  if (value.size() != target_.dim()) throw validation_error("multibracket: value dimension mismatch");
  const int out_deg = word_degree(w, source_) + degree_;
  for (int t = 0; t < target_.dim(); ++t)
    if (value(t) != 0 && target_.degree(t) != out_deg)
      throw validation_error("multibracket: entry on word '" + w.str(source_) +
                             "' violates degree " + std::to_string(degree_));
  if (value.isZero(0))
    entries_.erase(w);
  else
    entries_[w] = std::move(value);
}

void MultiBracket::add(const SymWord& w, const Vec& value) {
  Vec cur = eval_word(w);
  set(w, cur + value);
}

Vec MultiBracket::eval_word(const SymWord& w) const {
  auto it = entries_.find(w);
  if (it != entries_.end()) return it->second;
  return Vec::Zero(target_.dim());
}

Vec MultiBracket::eval_seq(const std::vector<int>& seq) const {
  if (static_cast<int>(seq.size()) != arity_) throw internal_error("multibracket: eval arity mismatch");
  NormalizedWord nw = normalize_word(seq, source_);
  if (nw.sign == 0) return Vec::Zero(target_.dim());
  return eval_word(nw.word) * nw.sign;
}

Vec MultiBracket::eval_args(const std::vector<Vec>& args) const {
  if (static_cast<int>(args.size()) != arity_) throw internal_error("multibracket: args arity mismatch");
  Vec out = Vec::Zero(target_.dim());
  if (is_zero()) return out;
  std::vector<int> seq(args.size());
  std::function<void(size_t, const Rational&)> rec = [&](size_t pos, const Rational& coeff) {
    if (pos == args.size()) {
      out += eval_seq(seq) * coeff;
      return;
    }
    for (int i = 0; i < source_.dim(); ++i) {
      if (args[pos](i) == 0) continue;
      seq[pos] = i;
      rec(pos + 1, coeff * args[pos](i));
    }
  };
  rec(0, rat(1));
  return out;
}

MultiBracket MultiBracket::operator+(const MultiBracket& o) const {
  if (!(source_ == o.source_) || !(target_ == o.target_) || arity_ != o.arity_ || degree_ != o.degree_)
    throw validation_error("multibracket sum: shape mismatch");
  MultiBracket out = *this;
  for (const auto& [w, v] : o.entries_) out.add(w, v);
  return out;
}

MultiBracket MultiBracket::operator-(const MultiBracket& o) const { return *this + o.scaled(rat(-1)); }

MultiBracket MultiBracket::scaled(const Rational& c) const {
  MultiBracket out(source_, target_, arity_, degree_);
  if (c == 0) return out;
  for (const auto& [w, v] : entries_) out.set(w, v * c);
  return out;
}

Coderivation::Coderivation(GradedSpace space, int degree, int max_arity)
    : space_(std::move(space)), degree_(degree), max_arity_(max_arity) {
  if (max_arity_ < 1) throw validation_error("coderivation: truncation arity must be >= 1");
  for (int n = 0; n <= max_arity_; ++n) coeffs_.emplace_back(space_, space_, n, degree_);
}

int Coderivation::top_nonzero_arity() const {
  for (int n = max_arity_; n >= 0; --n)
    if (!coeffs_[n].is_zero()) return n;
  return -1;
}

Coderivation Coderivation::operator+(const Coderivation& o) const {
  if (!(space_ == o.space_) || degree_ != o.degree_ || max_arity_ != o.max_arity_)
    throw validation_error("coderivation sum: shape mismatch");
  Coderivation out = *this;
  for (int n = 0; n <= max_arity_; ++n) out.coeffs_[n] = out.coeffs_[n] + o.coeffs_[n];
  return out;
}

Coderivation Coderivation::operator-(const Coderivation& o) const { return *this + o.scaled(rat(-1)); }

Coderivation Coderivation::scaled(const Rational& c) const {
  Coderivation out = *this;
  for (int n = 0; n <= max_arity_; ++n) out.coeffs_[n] = out.coeffs_[n].scaled(c);
  return out;
}

Rational unshuffle_sign(const SymWord& w, const std::vector<int>& sel, const GradedSpace& v) {
  int sign = 1;
  std::vector<char> in_sel(w.letters.size(), 0);
  for (int s : sel) in_sel[s] = 1;
  // count odd-odd inversions: pairs (s in sel, t not in sel, t < s)
  for (size_t s = 0; s < w.letters.size(); ++s) {
    if (!in_sel[s]) continue;
    for (size_t t = 0; t < s; ++t)
      if (!in_sel[t] && (v.degree(w.letters[s]) & 1) && (v.degree(w.letters[t]) & 1)) sign = -sign;
  }
  return rat(sign);
}

namespace {

void subsets_rec(int from, int need, int total, std::vector<int>& cur,
                 const std::function<void(const std::vector<int>&)>& fn) {
  if (need == 0) {
    fn(cur);
    return;
  }
  for (int i = from; i <= total - need; ++i) {
    cur.push_back(i);
    subsets_rec(i + 1, need - 1, total, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

void for_each_subset(int total, int size, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur;
  subsets_rec(0, size, total, cur, fn);
}

// Set partitions of {0..m-1}; blocks arrive ordered by their minimal element.
void for_each_set_partition(int m, const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  std::vector<std::vector<int>> blocks;
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      fn(blocks);
      return;
    }
    const size_t existing = blocks.size();  // recursion grows the vector
    for (size_t bi = 0; bi < existing; ++bi) {
      blocks[bi].push_back(i);
      rec(i + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({i});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
}

WordCombo apply_coderivation(const Coderivation& q, const SymWord& w) {
  WordCombo out;
  const GradedSpace& v = q.space();
  const int m = w.arity();
  for (int j = 0; j <= std::min(m, q.max_arity()); ++j) {
    if (q.arity_is_zero(j)) continue;
    if (m - j + 1 > q.max_arity()) continue;  // jet drop (only possible for j = 0)
    const MultiBracket& qj = q.coeff(j);
    for_each_subset(m, j, [&](const std::vector<int>& sel) {
      const Rational eps = unshuffle_sign(w, sel, v);
      std::vector<int> head;
      head.reserve(j);
      for (int s : sel) head.push_back(w.letters[s]);
      Vec val = qj.eval_seq(head);
      if (val.isZero(0)) return;
      std::vector<int> rest;
      std::vector<char> in_sel(m, 0);
      for (int s : sel) in_sel[s] = 1;
      for (int t = 0; t < m; ++t)
        if (!in_sel[t]) rest.push_back(w.letters[t]);
      for (int b = 0; b < v.dim(); ++b) {
        if (val(b) == 0) continue;
        std::vector<int> seq;
        seq.reserve(rest.size() + 1);
        seq.push_back(b);
        seq.insert(seq.end(), rest.begin(), rest.end());
        NormalizedWord nw = normalize_word(std::move(seq), v);
        if (nw.sign == 0) continue;
        add_to(out, nw.word, eps * val(b) * nw.sign);
      }
    });
  }
  return out;
}

WordCombo apply_coderivation(const Coderivation& q, const WordCombo& c) {
  WordCombo out;
  for (const auto& [w, coeff] : c) {
    WordCombo part = apply_coderivation(q, w);
    for (const auto& [u, c2] : part) add_to(out, u, coeff * c2);
  }
  return out;
}

MultiBracket compose_coefficient(const Coderivation& p, const Coderivation& q, int n) {
  if (!(p.space() == q.space())) throw validation_error("compose_coefficient: space mismatch");
  const GradedSpace& v = p.space();
  MultiBracket out(v, v, n, p.degree() + q.degree());
  for (const SymWord& w : enumerate_words(v, n)) {
    WordCombo mid = apply_coderivation(q, w);
    Vec acc = Vec::Zero(v.dim());
    for (const auto& [u, coeff] : mid) {
      if (u.arity() > p.max_arity()) continue;
      if (p.arity_is_zero(u.arity())) continue;
      acc += p.coeff(u.arity()).eval_word(u) * coeff;
    }
    if (!acc.isZero(0)) out.set(w, std::move(acc));
  }
  return out;
}

Coderivation nr_bracket(const Coderivation& p, const Coderivation& q) {
  if (!(p.space() == q.space()) || p.max_arity() != q.max_arity())
    throw validation_error("nr_bracket: space/truncation mismatch");
  Coderivation out(p.space(), p.degree() + q.degree(), p.max_arity());
  const Rational sign = ((p.degree() * q.degree()) & 1) ? rat(-1) : rat(1);
  for (int n = 0; n <= p.max_arity(); ++n) {
    MultiBracket pq = compose_coefficient(p, q, n);
    MultiBracket qp = compose_coefficient(q, p, n);
    out.coeff(n) = pq - qp.scaled(sign);
  }
  return out;
}

CoalgMorphism::CoalgMorphism(GradedSpace source, GradedSpace target, int max_arity)
    : source_(std::move(source)), target_(std::move(target)), max_arity_(max_arity) {
  if (max_arity_ < 1) throw validation_error("coalgebra morphism: truncation arity must be >= 1");
  for (int n = 0; n <= max_arity_; ++n) coeffs_.emplace_back(source_, target_, n, 0);
}

CoalgMorphism CoalgMorphism::identity(const GradedSpace& v, int max_arity) {
  return strict(GradedMap::identity(v), max_arity);
}

CoalgMorphism CoalgMorphism::strict(const GradedMap& f1, int max_arity) {
  if (f1.degree() != 0) throw validation_error("strict morphism: linear part must have degree 0");
  CoalgMorphism out(f1.source(), f1.target(), max_arity);
  for (int i = 0; i < f1.source().dim(); ++i) {
    Vec col = f1.matrix().col(i);
    if (!col.isZero(0)) out.coeff(1).set(SymWord{{i}}, col);
  }
  return out;
}

GradedMap CoalgMorphism::linear_part() const {
  Mat m = mat_zero(target_.dim(), source_.dim());
  for (int i = 0; i < source_.dim(); ++i) m.col(i) = coeffs_[1].eval_word(SymWord{{i}});
  return GradedMap(source_, target_, 0, std::move(m));
}

WordCombo apply_morphism(const CoalgMorphism& f, const SymWord& w) {
  WordCombo out;
  const GradedSpace& src = f.source();
  const GradedSpace& tgt = f.target();
  const int m = w.arity();
  if (m == 0) {
    add_to(out, SymWord{}, rat(1));
    return out;
  }
  std::vector<int> degs(m);
  for (int i = 0; i < m; ++i) degs[i] = src.degree(w.letters[i]);
  for_each_set_partition(m, [&](const std::vector<std::vector<int>>& blocks) {
    const int k = static_cast<int>(blocks.size());
    for (const auto& b : blocks)
      if (static_cast<int>(b.size()) > f.max_arity()) return;
    // Koszul sign of regrouping the letters into concatenated blocks
    std::vector<int> perm;
    perm.reserve(m);
    for (const auto& b : blocks) perm.insert(perm.end(), b.begin(), b.end());
    const Rational regroup = koszul_sign(perm, degs);
    if (regroup == 0) return;
    // evaluate the blocks
    std::vector<Vec> vals;
    vals.reserve(k);
    for (const auto& b : blocks) {
      std::vector<int> seq;
      seq.reserve(b.size());
      for (int pos : b) seq.push_back(w.letters[pos]);
      Vec val = f.coeff(static_cast<int>(b.size())).eval_seq(seq);
      if (val.isZero(0)) return;
      vals.push_back(std::move(val));
    }
    // expand the symmetric product of the block values
    std::vector<int> pick(k);
    std::function<void(int, const Rational&)> rec = [&](int bi, const Rational& coeff) {
      if (bi == k) {
        NormalizedWord nw = normalize_word(pick, tgt);
        if (nw.sign == 0) return;
        add_to(out, nw.word, coeff * nw.sign);
        return;
      }
      for (int t = 0; t < tgt.dim(); ++t) {
        if (vals[bi](t) == 0) continue;
        pick[bi] = t;
        rec(bi + 1, coeff * vals[bi](t));
      }
    };
    rec(0, regroup);
  });
  return out;
}

WordCombo apply_morphism(const CoalgMorphism& f, const WordCombo& c) {
  WordCombo out;
  for (const auto& [w, coeff] : c) {
    WordCombo part = apply_morphism(f, w);
    for (const auto& [u, c2] : part) add_to(out, u, coeff * c2);
  }
  return out;
}

CoalgMorphism compose(const CoalgMorphism& g, const CoalgMorphism& f) {
  if (!(g.source() == f.target())) throw validation_error("morphism compose: space mismatch");
  if (g.max_arity() != f.max_arity()) throw validation_error("morphism compose: truncation mismatch");
  CoalgMorphism out(f.source(), g.target(), f.max_arity());
  for (int n = 1; n <= f.max_arity(); ++n) {
    for (const SymWord& w : enumerate_words(f.source(), n)) {
      WordCombo mid = apply_morphism(f, w);
      Vec acc = Vec::Zero(g.target().dim());
      for (const auto& [u, coeff] : mid) acc += g.coeff(u.arity()).eval_word(u) * coeff;
      if (!acc.isZero(0)) out.coeff(n).set(w, std::move(acc));
    }
  }
  return out;
}

CoalgMorphism invert_unipotent(const CoalgMorphism& t) {
  if (!(t.source() == t.target())) throw internal_error("invert_unipotent: endomorphism required");
  if (!(t.linear_part().matrix() == mat_identity(t.source().dim())))
    throw internal_error("invert_unipotent: linear part must be the identity");
  const GradedSpace& v = t.source();
  const int cap = t.max_arity();
  CoalgMorphism s = CoalgMorphism::identity(v, cap);
  for (int n = 2; n <= cap; ++n) {
    // (S o T)_n = 0: the all-singletons partition contributes s_n itself.
    CoalgMorphism s_partial = s;  // coefficients below n are final
    for (const SymWord& w : enumerate_words(v, n)) {
      WordCombo mid = apply_morphism(t, w);
      Vec acc = Vec::Zero(v.dim());
      for (const auto& [u, coeff] : mid) {
        if (u.arity() == n && u == w) continue;  // handled by the unknown itself
        acc += s_partial.coeff(u.arity()).eval_word(u) * coeff;
      }
      // the singleton partition of w in T gives t_1^{sym n}(w) = w exactly
      if (!acc.isZero(0)) s.coeff(n).set(w, -acc);
    }
  }
  return s;
}

CoalgMorphism exponential(const Coderivation& alpha) {
  if (alpha.degree() != 0) throw validation_error("exponential: coderivation must have degree 0");
  if (!alpha.arity_is_zero(0) || !alpha.arity_is_zero(1))
    throw validation_error("exponential: nonzero constant or linear part would not terminate");
  const GradedSpace& v = alpha.space();
  CoalgMorphism out(v, v, alpha.max_arity());
  for (int n = 1; n <= alpha.max_arity(); ++n) {
    for (const SymWord& w : enumerate_words(v, n)) {
      WordCombo series = apply_exponential(alpha, +1, w);
      Vec val = corestrict(series, v);
      if (!val.isZero(0)) out.coeff(n).set(w, std::move(val));
    }
  }
  return out;
}

WordCombo apply_exponential(const Coderivation& alpha, int sign, const SymWord& w) {
  WordCombo acc;
  add_to(acc, w, rat(1));
  WordCombo power = acc;
  Rational fact(1);
  for (int m = 1; m <= w.arity(); ++m) {
    power = apply_coderivation(alpha, power);
    if (power.empty()) break;
    fact *= m;
    const Rational c = (sign < 0 && (m & 1)) ? Rational(-1 / fact) : Rational(1 / fact);
    for (const auto& [u, coeff] : power) add_to(acc, u, coeff * c);
  }
  return acc;
}

Coderivation conjugate(const Coderivation& q, const Coderivation& alpha) {
  if (!(q.space() == alpha.space()) || q.max_arity() != alpha.max_arity())
    throw validation_error("conjugate: space/truncation mismatch");
  if (alpha.degree() != 0 || !alpha.arity_is_zero(0) || !alpha.arity_is_zero(1))
    throw validation_error("conjugate: gauge must be degree 0 with q0 = q1 = 0");
  const GradedSpace& v = q.space();
  Coderivation out(v, q.degree(), q.max_arity());
  for (int n = 1; n <= q.max_arity(); ++n) {
    for (const SymWord& w : enumerate_words(v, n)) {
      WordCombo c = apply_exponential(alpha, -1, w);
      c = apply_coderivation(q, c);
      WordCombo full;
      for (const auto& [u, coeff] : c) {
        WordCombo part = apply_exponential(alpha, +1, u);
        for (const auto& [x, c2] : part) add_to(full, x, coeff * c2);
      }
      Vec val = corestrict(full, v);
      if (!val.isZero(0)) out.coeff(n).set(w, std::move(val));
    }
  }
  return out;
}

Vec corestrict(const WordCombo& c, const GradedSpace& target) {
  Vec out = Vec::Zero(target.dim());
  for (const auto& [w, coeff] : c)
    if (w.arity() == 1) out(w.letters[0]) += coeff;
  return out;
}

}  // namespace linf
