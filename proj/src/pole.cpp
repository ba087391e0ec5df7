#include "chebmark/pole.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "chebmark/error.hpp"

namespace chebmark {

namespace {

double parse_decimal(std::string token, const std::string& context) {
    if (!token.empty() && token.front() == '+') token.erase(token.begin());
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        raise(errc::invalid_parameters, "bad pole literal '" + context + "'");
    return value;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double PolePoint::abs() const {
    return infinite ? std::numeric_limits<double>::infinity() : std::hypot(re, im);
}

PolePoint parse_pole(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (c != ' ' && c != '\t') text.push_back(c);
    if (text.empty()) raise(errc::invalid_parameters, "empty pole literal");
    if (text == "inf") return PolePoint::infinity();
    if (text.back() == 'i') {
        const std::string body = text.substr(0, text.size() - 1);
        // Split at the sign of the imaginary part; skip a leading sign and
        // the sign of an exponent.
        for (std::size_t pos = body.size(); pos-- > 1;) {
            const char c = body[pos];
            if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
                const double re = parse_decimal(body.substr(0, pos), raw);
                std::string im_part = body.substr(pos);
                if (im_part == "+" || im_part == "-") im_part += "1";
                const double im = parse_decimal(im_part, raw);
                if (im == 0.0) return PolePoint::real(re);
                return PolePoint::complex_point(re, im);
            }
        }
        raise(errc::invalid_parameters, "bad complex pole literal '" + raw + "'");
    }
    return PolePoint::real(parse_decimal(text, raw));
}

std::string format_pole(const PolePoint& pole) {
    if (pole.infinite) return "inf";
    if (pole.im == 0.0) return format_double(pole.re);
    if (pole.im < 0.0) return format_double(pole.re) + "-" + format_double(-pole.im) + "i";
    return format_double(pole.re) + "+" + format_double(pole.im) + "i";
}

std::vector<PolePoint> parse_pole_list(const std::string& text) {
    std::vector<PolePoint> poles;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        poles.push_back(parse_pole(text.substr(pos, comma - pos)));
        if (comma == text.size()) break;
        pos = comma + 1;
    }
    return poles;
}

}  // namespace chebmark
