#include "peersel/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace peersel {

namespace {

[[noreturn]] void bad_decimal(std::string_view text) {
  throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
}

}  // namespace

Rat parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string int_part, frac_part;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    int_part.push_back(text[pos++]);
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      frac_part.push_back(text[pos++]);
    }
    if (frac_part.empty()) bad_decimal(text);
  }
  if (pos != text.size() || int_part.empty()) bad_decimal(text);

  Int numerator(int_part + frac_part, 10);  // explicit base: "07..." is not octal
  Int denominator(1);
  for (std::size_t i = 0; i < frac_part.size(); ++i) denominator *= 10;
  Rat value(numerator, denominator);
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

std::vector<Rat> parse_decimal_list(std::string_view text) {
  std::vector<Rat> values;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    values.push_back(parse_decimal(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

std::string format_fraction(const Rat& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

namespace {

Int pow10(int digits) {
  Int scale(1);
  for (int i = 0; i < digits; ++i) scale *= 10;
  return scale;
}

std::string render_scaled(const Int& scaled, int digits, bool negative) {
  std::string body = scaled.get_str();
  if (static_cast<int>(body.size()) <= digits) {
    body.insert(0, digits + 1 - body.size(), '0');
  }
  if (digits > 0) body.insert(body.size() - digits, ".");
  if (negative && scaled != 0) body.insert(0, "-");
  return body;
}

}  // namespace

std::string format_decimal(const Rat& value, int digits) {
  Rat magnitude = value >= 0 ? value : Rat(-value);
  Int num = magnitude.get_num() * pow10(digits);
  Int den = magnitude.get_den();
  Int quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Int twice = rem * 2;
  int cmp = mpz_cmp(twice.get_mpz_t(), den.get_mpz_t());
  if (cmp > 0 || (cmp == 0 && mpz_odd_p(quot.get_mpz_t()))) quot += 1;
  return render_scaled(quot, digits, value < 0);
}

std::string format_sqrt_decimal(const Rat& value, int digits) {
  if (value < 0) throw std::domain_error("sqrt of negative rational");
  // sqrt(N/D) * 10^d = sqrt(N * 10^(2d) * D) / D; round the left side
  // half-to-even using only integer comparisons.
  Int scale = pow10(digits);
  Int y = value.get_num() * scale * scale * value.get_den();
  Int root;
  mpz_sqrt(root.get_mpz_t(), y.get_mpz_t());
  const Int& d = value.get_den();
  Int quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), root.get_mpz_t(), d.get_mpz_t());
  // frac >= 1/2  <=>  4*y >= d^2 * (2*quot + 1)^2, with exact tie detection.
  (void)rem;
  Int lhs = 4 * y;
  Int boundary = d * d * (2 * quot + 1) * (2 * quot + 1);
  int cmp = mpz_cmp(lhs.get_mpz_t(), boundary.get_mpz_t());
  if (cmp > 0 || (cmp == 0 && mpz_odd_p(quot.get_mpz_t()))) quot += 1;
  return render_scaled(quot, digits, false);
}

Int rat_floor(const Rat& value) {
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
  return out;
}

Int rat_ceil(const Rat& value) {
  Int out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
  return out;
}

Rat rat_frac(const Rat& value) { return value - Rat(rat_floor(value)); }

bool rat_is_integer(const Rat& value) { return value.get_den() == 1; }

}  // namespace peersel
