// SPDX-License-Identifier: Apache-2.0
#include <cfkit/qcf.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <limits>

namespace cfkit {

// ------------------------------------------------------------- QPolynomial

QPolynomial::QPolynomial(Integer constant) {
  if (sgn(constant) != 0) terms_.emplace(Monomial{0, 0}, std::move(constant));
}

QPolynomial QPolynomial::monomial(Integer coeff, std::uint32_t q_degree, std::uint32_t x_degree) {
  QPolynomial p;
  p.add_term(Monomial{q_degree, x_degree}, coeff);
  return p;
}

QPolynomial QPolynomial::q() { return monomial(1, 1, 0); }
QPolynomial QPolynomial::x() { return monomial(1, 0, 1); }

bool QPolynomial::depends_on_x() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.x_degree != 0; });
}

std::uint32_t QPolynomial::x_degree() const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.x_degree);
  return d;
}

std::map<std::uint64_t, Integer> QPolynomial::substitute(std::uint64_t n) const {
  std::map<std::uint64_t, Integer> out;
  for (const auto& [m, c] : terms_) {
    const std::uint64_t d = m.q_degree + n * m.x_degree;
    Integer& slot = out[d];
    slot += c;
    if (sgn(slot) == 0) out.erase(d);
  }
  return out;
}

std::pair<Monomial, Integer> QPolynomial::dominant_term() const {
  if (terms_.empty()) throw PreconditionError("dominant term of the zero polynomial");
  auto best = terms_.begin();
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    const auto key = std::pair(it->first.x_degree, it->first.q_degree);
    if (key > std::pair(best->first.x_degree, best->first.q_degree)) best = it;
  }
  return *best;
}

void QPolynomial::add_term(const Monomial& m, const Integer& c) {
  if (sgn(c) == 0) return;
  Integer& slot = terms_[m];
  slot += c;
  if (sgn(slot) == 0) terms_.erase(m);
}

QPolynomial& QPolynomial::operator+=(const QPolynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

QPolynomial& QPolynomial::operator-=(const QPolynomial& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, Integer(-c));
  return *this;
}

QPolynomial& QPolynomial::operator*=(const QPolynomial& rhs) {
  QPolynomial product;
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : rhs.terms_) {
      product.add_term(Monomial{m1.q_degree + m2.q_degree, m1.x_degree + m2.x_degree}, Integer(c1 * c2));
    }
  }
  *this = std::move(product);
  return *this;
}

std::string QPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, Integer>> ordered(terms_.begin(), terms_.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& l, const auto& r) {
    return std::pair(l.first.x_degree, l.first.q_degree) > std::pair(r.first.x_degree, r.first.q_degree);
  });
  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& [m, c] = ordered[i];
    const bool negative = sgn(c) < 0;
    const Integer magnitude = abs(c);
    if (i == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::vector<std::string> factors;
    const bool has_vars = m.q_degree != 0 || m.x_degree != 0;
    if (!has_vars || magnitude != 1) factors.push_back(magnitude.get_str());
    auto var = [&](const char* name, std::uint32_t d) {
      if (d == 1) factors.emplace_back(name);
      if (d > 1) factors.push_back(std::string(name) + "^" + std::to_string(d));
    };
    var("q", m.q_degree);
    var("x", m.x_degree);
    for (std::size_t j = 0; j < factors.size(); ++j) out += (j ? "*" : "") + factors[j];
  }
  return out;
}

// ------------------------------------------------------------------ parser

namespace {

constexpr std::uint32_t kMaxExponent = 1'000'000;

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : text_(text) {}

  QPolynomial parse() {
    QPolynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  QPolynomial expr() {
    QPolynomial sum = accept('-') ? -term() : term();
    for (;;) {
      if (accept('+')) {
        sum += term();
      } else if (accept('-')) {
        sum -= term();
      } else {
        return sum;
      }
    }
  }

  QPolynomial term() {
    QPolynomial product = factor();
    while (accept('*')) product *= factor();
    return product;
  }

  QPolynomial factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer value(digits());
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/' || text_[pos_] == 'e')) {
        fail("non-integer coefficient");
      }
      return QPolynomial(value);
    }
    if (c == 'q' || c == 'x') {
      ++pos_;
      std::uint32_t e = 1;
      if (accept('^')) {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          fail("exponent must be a nonnegative integer literal");
        }
        const std::string d = digits();
        if (d.size() > 7 || std::stoul(d) > kMaxExponent) fail("exponent too large");
        e = static_cast<std::uint32_t>(std::stoul(d));
      }
      return c == 'q' ? QPolynomial::monomial(1, e, 0) : QPolynomial::monomial(1, 0, e);
    }
    if (c == '(') {
      ++pos_;
      QPolynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

QPolynomial parse_polynomial(std::string_view text) { return PolynomialParser(text).parse(); }

// ---------------------------------------------------------------- QFamily

void QFamily::validate() const {
  if (k == 0) throw PreconditionError("family '" + name + "': k must be positive");
  if (f.size() != k) throw PreconditionError("family '" + name + "': expected " + std::to_string(k) + " f polynomials");
  if (form == FamilyForm::General) {
    if (g.size() != k) {
      throw PreconditionError("family '" + name + "': expected " + std::to_string(k) + " g polynomials");
    }
    QPolynomial derived;
    for (const auto& [m, c] : g[0].terms()) derived += QPolynomial::monomial(c, m.q_degree, 0);
    if (!(derived == b0)) throw PreconditionError("family '" + name + "': b0 must equal g_0 at x = 1");
  } else {
    if (!g.empty()) throw PreconditionError("family '" + name + "': g polynomials need the general form");
    if (b0.depends_on_x()) throw PreconditionError("family '" + name + "': b0 must not depend on x");
  }
}

std::map<std::uint64_t, Integer> QFamily::numerator_polynomial(std::size_t n) const {
  if (n == 0) throw PreconditionError("partial numerators start at index 1");
  return f[(n - 1) % k].substitute((n - 1) / k);
}

std::map<std::uint64_t, Integer> QFamily::denominator_polynomial(std::size_t n) const {
  if (form == FamilyForm::General) return g[n % k].substitute(n / k);
  if (n == 0) return b0.substitute(0);
  return {{0, Integer(1)}};
}

// ---------------------------------------------------------- degree profile

namespace {

// Smallest block index from which the dominant term alone fixes the degree
// and the leading coefficient of p(q^n).
std::uint64_t dominance_threshold(const QPolynomial& p) {
  const auto [dom, coeff] = p.dominant_term();
  std::uint64_t threshold = 0;
  for (const auto& [m, c] : p.terms()) {
    if (m.x_degree >= dom.x_degree || m.q_degree < dom.q_degree) continue;
    const std::uint64_t gap = dom.x_degree - m.x_degree;
    threshold = std::max<std::uint64_t>(threshold, (m.q_degree - dom.q_degree) / gap + 1);
  }
  return threshold;
}

struct SequenceLaw {
  std::int64_t step = 0;
  std::int64_t first_degree = 0;
  Integer leading;
};

// Checks one block-periodic sequence: term index j lives in block j / k (shifted
// by `first`). Past the largest dominance threshold every degree is affine in
// the block number, so verifying two full blocks beyond it settles all indices.
std::variant<SequenceLaw, ProfileViolation> check_sequence(
    char name, std::size_t first, const std::vector<QPolynomial>& polys,
    const std::function<std::map<std::uint64_t, Integer>(std::size_t)>& at) {
  const std::size_t k = polys.size();
  std::uint64_t threshold = 0;
  for (std::size_t t = 0; t < k; ++t) {
    if (polys[t].is_zero()) {
      const std::size_t j = first + t;
      return ProfileViolation{"polynomial for this position is identically zero", name, j, j};
    }
    threshold = std::max(threshold, dominance_threshold(polys[t]));
  }
  const std::size_t last = first + (threshold + 2) * k;

  std::vector<std::pair<std::int64_t, Integer>> deg_lead;
  for (std::size_t j = first; j <= last; ++j) {
    const auto poly = at(j);
    if (poly.empty()) return ProfileViolation{"term vanishes identically", name, j, j};
    const auto& [d, c] = *poly.rbegin();
    deg_lead.emplace_back(static_cast<std::int64_t>(d), c);
  }
  for (std::size_t j = first + 1; j <= last; ++j) {
    if (deg_lead[j - first].second != deg_lead[0].second) {
      return ProfileViolation{"unequal leading coefficients", name, first, j};
    }
  }
  const std::int64_t step = deg_lead[1].first - deg_lead[0].first;
  if (step <= 0) return ProfileViolation{"degree does not increase", name, first, first + 1};
  for (std::size_t j = first + 1; j <= last; ++j) {
    if (deg_lead[j - first].first - deg_lead[j - first - 1].first != step) {
      return ProfileViolation{"degree step is not constant", name, j - 1, j};
    }
  }
  return SequenceLaw{step, deg_lead[0].first, deg_lead[0].second};
}

}  // namespace

std::variant<DegreeProfile, ProfileViolation> degree_profile(const QFamily& family) {
  family.validate();
  DegreeProfile profile;
  profile.form = family.form;

  auto numerators = check_sequence('a', 1, family.f, [&](std::size_t j) { return family.numerator_polynomial(j); });
  if (auto* v = std::get_if<ProfileViolation>(&numerators)) return *v;
  const auto& a_law = std::get<SequenceLaw>(numerators);
  profile.numerator_step = a_law.step;
  profile.r1 = a_law.first_degree;
  profile.leading_a = a_law.leading;

  if (family.form == FamilyForm::General) {
    auto denominators =
        check_sequence('b', 0, family.g, [&](std::size_t j) { return family.denominator_polynomial(j); });
    if (auto* v = std::get_if<ProfileViolation>(&denominators)) return *v;
    const auto& b_law = std::get<SequenceLaw>(denominators);
    profile.denominator_step = b_law.step;
    profile.r2 = b_law.first_degree;
    profile.leading_b = b_law.leading;
  } else {
    const auto b0 = family.b0.substitute(0);
    profile.r2 = b0.empty() ? 0 : static_cast<std::int64_t>(b0.rbegin()->first);
    profile.leading_b = 1;
  }
  return profile;
}

// ---------------------------------------------------------------- registry

CoefficientSource<ExactComplex> example2_source() {
  return CoefficientSource<ExactComplex>(ExactComplex(0), [](std::size_t i) {
    if (i == 1) return PartialQuotient<ExactComplex>(2, 1);
    if (i == 2) return PartialQuotient<ExactComplex>(-1, 2);
    if (i % 2 == 1) {
      const Integer n((i - 1) / 2);
      Rational a = Rational(1) + Rational(1, 2 * n * n) + Rational(1, n);
      Rational b = Rational(-1, 2 * n * n * n);
      a.canonicalize();
      b.canonicalize();
      return PartialQuotient<ExactComplex>(a, b);
    }
    const Integer n((i - 2) / 2);
    const Integer m = 1 + 2 * n + 2 * n * n;
    Rational a(2 * (1 + n) * (1 + n) * (1 + n), n * m);
    Rational b(1 + n, m);
    a.canonicalize();
    b.canonicalize();
    return PartialQuotient<ExactComplex>(a, b);
  });
}

namespace {

QFamily unit_family(std::string name, std::vector<std::string> f) {
  QFamily fam;
  fam.name = std::move(name);
  fam.form = FamilyForm::UnitDenominator;
  fam.k = f.size();
  for (const auto& s : f) fam.f.push_back(parse_polynomial(s));
  return fam;
}

QFamily general_family(std::string name, std::vector<std::string> f, std::vector<std::string> g, std::string b0) {
  QFamily fam;
  fam.name = std::move(name);
  fam.form = FamilyForm::General;
  fam.k = f.size();
  for (const auto& s : f) fam.f.push_back(parse_polynomial(s));
  for (const auto& s : g) fam.g.push_back(parse_polynomial(s));
  fam.b0 = parse_polynomial(b0);
  return fam;
}

}  // namespace

std::vector<std::string> registry_names() {
  return {"rogers-ramanujan", "ramanujan-selberg-1", "ramanujan-selberg-2", "ramanujan-selberg-3",
          "goellnitz-gordon", "g1", "g2", "example2-G"};
}

RegistryEntry registry_lookup(std::string_view name) {
  if (name == "rogers-ramanujan") return unit_family("rogers-ramanujan", {"q*x"});
  // q/1 + (q+q^2)/1 + q^3/1 + (q^2+q^4)/1 + ...
  if (name == "ramanujan-selberg-1") return unit_family("ramanujan-selberg-1", {"q*x^2", "q*x + q^2*x^2"});
  // (q+q^2)/1 + q^4/1 + (q^3+q^6)/1 + q^8/1 + ...
  if (name == "ramanujan-selberg-2") return unit_family("ramanujan-selberg-2", {"q^2*x^4 + q*x^2", "q^4*x^4"});
  // (q^n + q^{2n})/1
  if (name == "ramanujan-selberg-3") return unit_family("ramanujan-selberg-3", {"q^2*x^2 + q*x"});
  if (name == "goellnitz-gordon") return general_family("goellnitz-gordon", {"q^2*x^2"}, {"q*x^2 + 1"}, "q + 1");
  if (name == "g1") {
    return unit_family("g1", {"q*x^4 + 3*q*x^3 + 2*q*x^2", "q^2*x^4 + 2*q^2*x^3 + 7*q*x^2",
                              "q^3*x^4 + 5*q^2*x^3 + 2*q^3*x^2", "q^4*x^4 + 7*q^3*x^3 + 3*q*x^2 + 2*x"});
  }
  if (name == "g2") {
    return general_family("g2",
                          {"q^3*x^12 + 3*q^2*x^6 + 2*q^2*x^4", "q^6*x^12 + 2*q^4*x^6 + 7*q^2*x^4",
                           "q^9*x^12 + 5*q^4*x^6 + 2*q^6*x^4", "q^12*x^12 + 7*q^6*x^6 + 3*q^2*x^4 + 2*x^2"},
                          {"q*x^4 + x + 1", "q^2*x^4 + x^2 + 1", "q^3*x^4 + x^2 + 1", "q^4*x^4 + x^3 + 1"}, "q + 2");
  }
  if (name == "example2-G") return RuleFamily{"example2-G", example2_source};
  throw UnknownFamily(std::string(name));
}

// -------------------------------------------------------------------- JSON

QFamily family_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("family JSON: ") + e.what(), e.byte);
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("family JSON: missing '") + key + "'", 0);
    return doc.at(key);
  };
  auto polys = [](const nlohmann::json& arr, const char* key) {
    if (!arr.is_array()) throw ParseError(std::string("family JSON: '") + key + "' must be an array", 0);
    std::vector<QPolynomial> out;
    for (const auto& item : arr) {
      if (!item.is_string()) throw ParseError(std::string("family JSON: '") + key + "' entries must be strings", 0);
      out.push_back(parse_polynomial(item.get<std::string>()));
    }
    return out;
  };

  QFamily fam;
  const auto& name = require("name");
  const auto& form = require("form");
  const auto& k = require("k");
  if (!name.is_string() || !form.is_string() || !k.is_number_unsigned()) {
    throw ParseError("family JSON: 'name'/'form' must be strings and 'k' a positive integer", 0);
  }
  fam.name = name.get<std::string>();
  const auto form_text = form.get<std::string>();
  if (form_text == "unit-denominator") {
    fam.form = FamilyForm::UnitDenominator;
  } else if (form_text == "general") {
    fam.form = FamilyForm::General;
  } else {
    throw ParseError("family JSON: unknown form '" + form_text + "'", 0);
  }
  fam.k = k.get<std::size_t>();
  fam.f = polys(require("f"), "f");
  if (fam.form == FamilyForm::General) fam.g = polys(require("g"), "g");
  if (doc.contains("b0")) {
    if (!doc["b0"].is_string()) throw ParseError("family JSON: 'b0' must be a string", 0);
    fam.b0 = parse_polynomial(doc["b0"].get<std::string>());
  } else if (fam.form == FamilyForm::General && !fam.g.empty()) {
    fam.b0 = QPolynomial();
    for (const auto& [m, c] : fam.g[0].terms()) fam.b0 += QPolynomial::monomial(c, m.q_degree, 0);
  }
  try {
    fam.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("family JSON: ") + e.what(), 0);
  }
  return fam;
}

std::string family_to_json(const QFamily& family) {
  nlohmann::json doc;
  doc["name"] = family.name;
  doc["form"] = family.form == FamilyForm::General ? "general" : "unit-denominator";
  doc["k"] = family.k;
  doc["b0"] = family.b0.to_string();
  auto strings = [](const std::vector<QPolynomial>& ps) {
    std::vector<std::string> out;
    for (const auto& p : ps) out.push_back(p.to_string());
    return out;
  };
  doc["f"] = strings(family.f);
  if (family.form == FamilyForm::General) doc["g"] = strings(family.g);
  return doc.dump(2);
}

}  // namespace cfkit
