#pragma once

#include <complex>
#include <string>
#include <vector>

namespace chebmark {

// One pole of the rational class: the point at infinity, a finite real, or a
// finite complex point. Complex poles always travel with their conjugates;
// pairing is handled by the consumers, a PolePoint itself is a single point.
struct PolePoint {
    bool infinite = true;
    double re = 0.0;
    double im = 0.0;

    static PolePoint infinity() { return {}; }
    static PolePoint real(double x) { return {false, x, 0.0}; }
    static PolePoint complex_point(double re, double im) { return {false, re, im}; }

    bool is_real() const { return !infinite && im == 0.0; }
    bool is_complex() const { return !infinite && im != 0.0; }
    std::complex<double> value() const { return {re, im}; }
    PolePoint conjugate() const { return infinite ? *this : PolePoint{false, re, -im}; }
    double abs() const;

    friend bool operator==(const PolePoint&, const PolePoint&) = default;
};

// Literals: "inf", decimal reals, "a+bi" / "a-bi".
PolePoint parse_pole(const std::string& text);
std::string format_pole(const PolePoint& pole);

// Comma-separated pole literal list.
std::vector<PolePoint> parse_pole_list(const std::string& text);

}  // namespace chebmark
