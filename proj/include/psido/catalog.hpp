#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "psido/symbol.hpp"

namespace psido {

namespace detail {

// Minimal expression grammar for user symbol coefficients: one real variable
// t, literals, + - * / ^, parentheses, and a handful of functions.
//   expr   := term (('+'|'-') term)*
//   term   := pow (('*'|'/') pow)*
//   pow    := unary ('^' pow)?
//   unary  := ('-'|'+')? primary
//   primary:= number | 't' | 'pi' | fn '(' expr ')' | '(' expr ')'
class ExprParser {
 public:
  using Fn = std::function<double(double)>;

  static Fn parse(const std::string& src) {
    ExprParser p(src);
    Fn f = p.expr();
    p.skip_ws();
    if (p.pos_ != p.s_.size())
      throw std::invalid_argument("expression: trailing input at '" + p.s_.substr(p.pos_) + "'");
    return f;
  }

 private:
  explicit ExprParser(std::string s) : s_(std::move(s)) {}

  std::string s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Fn expr() {
    Fn acc = term();
    while (true) {
      if (eat('+')) {
        Fn rhs = term();
        acc = [acc, rhs](double t) { return acc(t) + rhs(t); };
      } else if (eat('-')) {
        Fn rhs = term();
        acc = [acc, rhs](double t) { return acc(t) - rhs(t); };
      } else {
        return acc;
      }
    }
  }
  Fn term() {
    Fn acc = pow_();
    while (true) {
      if (eat('*')) {
        Fn rhs = pow_();
        acc = [acc, rhs](double t) { return acc(t) * rhs(t); };
      } else if (eat('/')) {
        Fn rhs = pow_();
        acc = [acc, rhs](double t) { return acc(t) / rhs(t); };
      } else {
        return acc;
      }
    }
  }
  Fn pow_() {
    Fn base = unary();
    if (eat('^')) {
      Fn e = pow_();
      return [base, e](double t) { return std::pow(base(t), e(t)); };
    }
    return base;
  }
  Fn unary() {
    if (eat('-')) {
      Fn v = primary();
      return [v](double t) { return -v(t); };
    }
    eat('+');
    return primary();
  }
  Fn primary() {
    skip_ws();
    if (eat('(')) {
      Fn v = expr();
      if (!eat(')')) throw std::invalid_argument("expression: missing ')'");
      return v;
    }
    if (pos_ >= s_.size()) throw std::invalid_argument("expression: unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return [v](double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "t") return [](double t) { return t; };
      if (id == "pi") return [](double) { return M_PI; };
      static const std::vector<std::pair<std::string, double (*)(double)>> fns = {
          {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
          {"exp", std::exp}, {"log", std::log},   {"tanh", std::tanh},
          {"cosh", std::cosh}, {"sinh", std::sinh}, {"sqrt", std::sqrt},
          {"abs", std::fabs}};
      for (const auto& [nm, fp] : fns) {
        if (id == nm) {
          if (!eat('(')) throw std::invalid_argument("expression: '" + nm + "' needs '('");
          Fn arg = expr();
          if (!eat(')')) throw std::invalid_argument("expression: missing ')'");
          return [fp, arg](double t) { return fp(arg(t)); };
        }
      }
      throw std::invalid_argument("expression: unknown identifier '" + id + "'");
    }
    throw std::invalid_argument(std::string("expression: unexpected character '") + c + "'");
  }
};

// Physicists' Hermite polynomial, for closed Gaussian derivatives:
// d^k/dz^k e^{-z^2} = (-1)^k H_k(z) e^{-z^2}.
inline double hermite(int k, double z) {
  double h0 = 1.0, h1 = 2.0 * z;
  if (k == 0) return h0;
  if (k == 1) return h1;
  for (int i = 2; i <= k; ++i) {
    double h2 = 2.0 * z * h1 - 2.0 * (i - 1) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Built-in symbols. All are 1-D unless stated; every entry carries its
// declared (order, rho, delta) and, where cheap, a closed derivative oracle.

inline Symbol sym_identity(int n = 1) {
  Symbol s = symbol_from_t_form(
      n, 0, 1, 0, [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return cd(1.0, 0.0); },
      "identity");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd&, const Eigen::VectorXd&) {
    return (midx_total(a) + midx_total(b) == 0) ? cd(1.0, 0.0) : cd(0.0, 0.0);
  };
  s.deriv_depth = 99;
  return s;
}

// Frequency symbol of the invariant derivative along axis 0.
inline Symbol sym_dfield() {
  Symbol s = symbol_from_t_form(
      1, 1, 1, 0,
      [](const Eigen::VectorXd&, const Eigen::VectorXd& xi) { return cd(0.0, 2.0 * M_PI * xi[0]); },
      "dfield");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd&, const Eigen::VectorXd& xi) -> cd {
    if (midx_total(b) > 0) return 0.0;
    if (midx_total(a) == 0) return cd(0.0, 2.0 * M_PI * xi[0]);
    if (midx_total(a) == 1) return cd(0.0, 2.0 * M_PI);
    return 0.0;
  };
  s.deriv_depth = 99;
  return s;
}

// (1 + 4 pi^2 xi^2)^{r/2}: the Bessel-potential multiplier of order r.
inline Symbol sym_bessel(double r) {
  Symbol s = symbol_from_t_form(
      1, r, 1, 0,
      [r](const Eigen::VectorXd&, const Eigen::VectorXd& xi) {
        return cd(std::pow(1.0 + 4.0 * M_PI * M_PI * xi[0] * xi[0], r / 2.0), 0.0);
      },
      "bessel(" + std::to_string(r) + ")");
  s.df = [r](const MIdx& a, const MIdx& b, const Eigen::VectorXd&,
             const Eigen::VectorXd& xi) -> cd {
    if (midx_total(b) > 0) return 0.0;
    double c4 = 4.0 * M_PI * M_PI, x = xi[0], u = 1.0 + c4 * x * x;
    switch (midx_total(a)) {
      case 0:
        return std::pow(u, r / 2.0);
      case 1:
        return c4 * r * x * std::pow(u, r / 2.0 - 1.0);
      case 2:
        return c4 * r * std::pow(u, r / 2.0 - 2.0) * (u + 2.0 * c4 * x * x * (r / 2.0 - 1.0));
      default:
        throw std::logic_error("bessel: oracle depth exceeded");
    }
  };
  s.deriv_depth = 2;
  return s;
}

// Annihilation-type symbol 2 pi i xi + t; its quantization is d/dt + t. in the
// chart, with one-dimensional kernel spanned by the Gaussian.
inline Symbol sym_oscillator() {
  Symbol s = symbol_from_t_form(
      1, 1, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        return cd(t[0], 2.0 * M_PI * xi[0]);
      },
      "oscillator");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t,
            const Eigen::VectorXd& xi) -> cd {
    int ka = midx_total(a), kb = midx_total(b);
    if (ka == 0 && kb == 0) return cd(t[0], 2.0 * M_PI * xi[0]);
    if (ka == 1 && kb == 0) return cd(0.0, 2.0 * M_PI);
    if (ka == 0 && kb == 1) return 1.0;
    return 0.0;
  };
  s.deriv_depth = 99;
  return s;
}

// Creation-type adjoint symbol -2 pi i xi + t (empty kernel, Gaussian cokernel).
inline Symbol sym_oscillator_adj() {
  Symbol s = symbol_from_t_form(
      1, 1, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        return cd(t[0], -2.0 * M_PI * xi[0]);
      },
      "oscillator_adj");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t,
            const Eigen::VectorXd& xi) -> cd {
    int ka = midx_total(a), kb = midx_total(b);
    if (ka == 0 && kb == 0) return cd(t[0], -2.0 * M_PI * xi[0]);
    if (ka == 1 && kb == 0) return cd(0.0, -2.0 * M_PI);
    if (ka == 0 && kb == 1) return 1.0;
    return 0.0;
  };
  s.deriv_depth = 99;
  return s;
}

// Square of the unimodular phase of t + 2 pi i xi: equals
// (t + 2 pi i xi)/(t - 2 pi i xi), winding 2 around the origin.
inline Symbol sym_squared_ratio() {
  return symbol_from_t_form(
      1, 0, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        cd w(t[0], 2.0 * M_PI * xi[0]);
        return w / std::conj(w);
      },
      "squared_ratio");
}

inline Symbol sym_squared_ratio_conj() {
  return symbol_from_t_form(
      1, 0, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        cd w(t[0], 2.0 * M_PI * xi[0]);
        return std::conj(w) / w;
      },
      "squared_ratio_conj");
}

// c + e^{-t^2 - xi^2}: boundary/high-frequency limit magnitude exactly c.
inline Symbol sym_gohberg(double c) {
  Symbol s = symbol_from_t_form(
      1, 0, 1, 0,
      [c](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        return cd(c + std::exp(-t[0] * t[0] - xi[0] * xi[0]), 0.0);
      },
      "gohberg(" + std::to_string(c) + ")");
  s.df = [c](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t,
             const Eigen::VectorXd& xi) -> cd {
    int ka = midx_total(a), kb = midx_total(b);
    double g = std::exp(-t[0] * t[0] - xi[0] * xi[0]);
    double sign = ((ka + kb) % 2 == 0) ? 1.0 : -1.0;
    double v = sign * detail::hermite(ka, xi[0]) * detail::hermite(kb, t[0]) * g;
    if (ka == 0 && kb == 0) v += c;
    return v;
  };
  s.deriv_depth = 4;
  return s;
}

// Normalized annihilation symbol, order 0 in the joint (t, xi) weight.
inline Symbol sym_shubin_annihilation() {
  return symbol_from_t_form(
      1, 0, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        cd w(t[0], 2.0 * M_PI * xi[0]);
        return w / std::sqrt(1.0 + t[0] * t[0] + 4.0 * M_PI * M_PI * xi[0] * xi[0]);
      },
      "shubin_annihilation");
}

inline Symbol sym_sine() {
  Symbol s = symbol_from_t_form(
      1, 0, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd&) { return cd(std::sin(t[0]), 0.0); },
      "sine");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t, const Eigen::VectorXd&) -> cd {
    if (midx_total(a) > 0) return 0.0;
    switch (midx_total(b) % 4) {
      case 0: return std::sin(t[0]);
      case 1: return std::cos(t[0]);
      case 2: return -std::sin(t[0]);
      default: return -std::cos(t[0]);
    }
  };
  s.deriv_depth = 99;
  return s;
}

// Oscillating order-0 symbol with rho = 0: e^{i sin xi} sin(t).
inline Symbol sym_mod_osc() {
  Symbol s = symbol_from_t_form(
      1, 0, 0, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        return std::polar(1.0, std::sin(xi[0])) * std::sin(t[0]);
      },
      "mod_osc");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t,
            const Eigen::VectorXd& xi) -> cd {
    cd e = std::polar(1.0, std::sin(xi[0]));
    double tb;
    switch (midx_total(b) % 4) {
      case 0: tb = std::sin(t[0]); break;
      case 1: tb = std::cos(t[0]); break;
      case 2: tb = -std::sin(t[0]); break;
      default: tb = -std::cos(t[0]); break;
    }
    switch (midx_total(a)) {
      case 0: return e * tb;
      case 1: return cd(0.0, std::cos(xi[0])) * e * tb;
      case 2:
        return (cd(0.0, -std::sin(xi[0])) - std::cos(xi[0]) * std::cos(xi[0])) * e * tb;
      default: throw std::logic_error("mod_osc: oracle depth exceeded");
    }
  };
  s.deriv_depth = 2;
  return s;
}

// Elliptic order-2 symbol with an oscillating zeroth-order part:
// 1 + 4 pi^2 xi^2 + sin(t). Elliptic away from low frequencies (R >= 1).
inline Symbol sym_helmholtz_sine() {
  Symbol s = symbol_from_t_form(
      1, 2, 1, 0,
      [](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        return cd(1.0 + 4.0 * M_PI * M_PI * xi[0] * xi[0] + std::sin(t[0]), 0.0);
      },
      "helmholtz_sine");
  s.df = [](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t,
            const Eigen::VectorXd& xi) -> cd {
    int ka = midx_total(a), kb = midx_total(b);
    if (ka > 0 && kb > 0) return 0.0;
    if (ka == 0 && kb == 0)
      return 1.0 + 4.0 * M_PI * M_PI * xi[0] * xi[0] + std::sin(t[0]);
    if (kb == 0) {
      if (ka == 1) return 8.0 * M_PI * M_PI * xi[0];
      if (ka == 2) return 8.0 * M_PI * M_PI;
      return 0.0;
    }
    switch (kb % 4) {
      case 1: return std::cos(t[0]);
      case 2: return -std::sin(t[0]);
      case 3: return -std::cos(t[0]);
      default: return std::sin(t[0]);
    }
  };
  s.deriv_depth = 99;
  return s;
}

// (1+4 pi^2 xi^2)^{r/2} sin(t): x-dependent symbol of order r.
inline Symbol sym_bessel_sine(double r) {
  Symbol bes = sym_bessel(r);
  Symbol s = symbol_from_t_form(
      1, r, 1, 0,
      [bes](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        return bes.value(t, xi) * std::sin(t[0]);
      },
      "bessel_sine(" + std::to_string(r) + ")");
  s.df = [bes](const MIdx& a, const MIdx& b, const Eigen::VectorXd& t,
               const Eigen::VectorXd& xi) -> cd {
    cd xpart = bes.df(a, MIdx{0}, t, xi);
    switch (midx_total(b) % 4) {
      case 0: return xpart * std::sin(t[0]);
      case 1: return xpart * std::cos(t[0]);
      case 2: return xpart * -std::sin(t[0]);
      default: return xpart * -std::cos(t[0]);
    }
  };
  s.deriv_depth = 2;
  return s;
}

// User polynomial in xi: sigma(t, xi) = sum_k c_k(t) (2 pi i xi)^k with the
// coefficients given as expressions over t, e.g. "poly:sin(t);1+t^2".
inline Symbol sym_user_poly(const std::string& spec_str) {
  std::vector<std::function<double(double)>> coeffs;
  std::string rest = spec_str;
  while (!rest.empty()) {
    size_t cut = rest.find(';');
    std::string piece = cut == std::string::npos ? rest : rest.substr(0, cut);
    rest = cut == std::string::npos ? std::string() : rest.substr(cut + 1);
    coeffs.push_back(detail::ExprParser::parse(piece));
  }
  if (coeffs.empty()) throw std::invalid_argument("poly: no coefficients given");
  double order = static_cast<double>(coeffs.size() - 1);
  return symbol_from_t_form(
      1, order, 1, 0,
      [coeffs](const Eigen::VectorXd& t, const Eigen::VectorXd& xi) {
        cd acc = 0.0, z = cd(0.0, 2.0 * M_PI * xi[0]), p = 1.0;
        for (const auto& c : coeffs) {
          acc += c(t[0]) * p;
          p *= z;
        }
        return acc;
      },
      "poly:" + spec_str);
}

// ---------------------------------------------------------------------------
// Name-based lookup used by the CLI and the suites.

struct CatalogEntry {
  std::string name;     // lookup key, parameters shown as placeholders
  std::string params;   // "" | "r" | "c" | "expr;expr;..."
  double order, rho, delta;
  int nu;
  std::string summary;
};

inline std::vector<CatalogEntry> catalog_entries() {
  return {
      {"identity", "", 0, 1, 0, 1, "constant symbol 1"},
      {"dfield", "", 1, 1, 0, 1, "invariant derivative symbol 2*pi*i*xi"},
      {"bessel", "r", -1, 1, 0, 1, "Bessel multiplier (1+4pi^2 xi^2)^(r/2)"},
      {"oscillator", "", 1, 1, 0, 1, "annihilation symbol 2*pi*i*xi + t"},
      {"oscillator_adj", "", 1, 1, 0, 1, "creation symbol -2*pi*i*xi + t"},
      {"squared_ratio", "", 0, 1, 0, 1, "phase ratio, winding 2; singular at t=xi=0, contour use only"},
      {"squared_ratio_conj", "", 0, 1, 0, 1, "conjugate phase ratio, winding -2; contour use only"},
      {"gohberg", "c", 0, 1, 0, 1, "c + exp(-t^2-xi^2), boundary limit c"},
      {"shubin_annihilation", "", 0, 1, 0, 1, "normalized annihilation symbol"},
      {"sine", "", 0, 1, 0, 1, "zeroth-order coefficient sin(t)"},
      {"mod_osc", "", 0, 0, 0, 1, "exp(i sin xi) sin(t), rho = 0"},
      {"helmholtz_sine", "", 2, 1, 0, 1, "1 + 4pi^2 xi^2 + sin(t)"},
      {"bessel_sine", "r", -1, 1, 0, 1, "(1+4pi^2 xi^2)^(r/2) sin(t)"},
      {"poly", "expr;expr;...", -1, 1, 0, 1,
       "sum_k c_k(t) (2*pi*i*xi)^k with expression coefficients"},
  };
}

inline Symbol make_catalog_symbol(const std::string& name) {
  auto param_of = [&](const std::string& base) -> std::string {
    if (name.rfind(base + "(", 0) == 0 && name.back() == ')')
      return name.substr(base.size() + 1, name.size() - base.size() - 2);
    return {};
  };
  if (name == "identity") return sym_identity();
  if (name == "dfield") return sym_dfield();
  if (name == "oscillator") return sym_oscillator();
  if (name == "oscillator_adj") return sym_oscillator_adj();
  if (name == "squared_ratio") return sym_squared_ratio();
  if (name == "squared_ratio_conj") return sym_squared_ratio_conj();
  if (name == "shubin_annihilation") return sym_shubin_annihilation();
  if (name == "sine") return sym_sine();
  if (name == "mod_osc") return sym_mod_osc();
  if (name == "helmholtz_sine") return sym_helmholtz_sine();
  if (auto p = param_of("bessel"); !p.empty()) return sym_bessel(std::stod(p));
  if (auto p = param_of("bessel_sine"); !p.empty()) return sym_bessel_sine(std::stod(p));
  if (auto p = param_of("gohberg"); !p.empty()) return sym_gohberg(std::stod(p));
  if (name.rfind("poly:", 0) == 0) return sym_user_poly(name.substr(5));
  throw std::invalid_argument("unknown catalog symbol: " + name);
}

}  // namespace psido
