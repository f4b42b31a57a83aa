#include "fixpoint/spaces.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fixpoint/numfmt.hpp"

namespace fixpoint {

Point Point::scalar(double v) {
    if (!std::isfinite(v)) throw ParamError("Point::scalar: value must be finite");
    Point p;
    p.scalar_ = true;
    p.value_ = v == 0.0 ? 0.0 : v;  // normalize -0.0
    return p;
}

Point Point::seq(Entries entries) {
    Point p;
    p.scalar_ = false;
    p.value_ = 0.0;
    for (auto it = entries.begin(); it != entries.end();) {
        if (it->first < 1) throw ParamError("Point::seq: indices start at 1");
        if (!std::isfinite(it->second)) throw ParamError("Point::seq: values must be finite");
        if (it->second == 0.0) {
            it = entries.erase(it);
        } else {
            ++it;
        }
    }
    p.entries_ = std::move(entries);
    return p;
}

double Point::scalar_value() const {
    if (!scalar_) throw StructureError("expected a scalar point, got a sequence");
    return value_;
}

const Point::Entries& Point::entries() const {
    if (scalar_) throw StructureError("expected a sequence point, got a scalar");
    return entries_;
}

double Point::coord(int n) const {
    if (scalar_) throw StructureError("coord: point is a scalar");
    auto it = entries_.find(n);
    return it == entries_.end() ? 0.0 : it->second;
}

namespace {

bool value_is_integral(double v) {
    return std::abs(v) < 9.0e15 && std::nearbyint(v) == v;
}

}  // namespace

bool Point::is_integral() const {
    if (scalar_) return value_is_integral(value_);
    for (const auto& [n, v] : entries_) {
        if (!value_is_integral(v)) return false;
    }
    return true;
}

bool Point::operator==(const Point& other) const {
    if (scalar_ != other.scalar_) return false;
    if (scalar_) return value_ == other.value_;
    return entries_ == other.entries_;
}

json Point::to_json() const {
    if (scalar_) return json(value_);
    json obj = json::object();
    for (const auto& [n, v] : entries_) obj[std::to_string(n)] = v;
    return obj;
}

Point Point::from_json(const json& j) {
    if (j.is_number()) return scalar(j.get<double>());
    if (j.is_object()) {
        Entries entries;
        for (const auto& [key, value] : j.items()) {
            size_t pos = 0;
            int n = 0;
            try {
                n = std::stoi(key, &pos);
            } catch (const std::exception&) {
                throw ParamError("Point::from_json: non-integer index '" + key + "'");
            }
            if (pos != key.size()) {
                throw ParamError("Point::from_json: non-integer index '" + key + "'");
            }
            if (!value.is_number()) throw ParamError("Point::from_json: values must be numbers");
            entries[n] = value.get<double>();
        }
        return seq(std::move(entries));
    }
    throw ParamError("Point::from_json: expected a number or an index->value object");
}

std::string Point::to_compact_string() const {
    if (scalar_) return format_double(value_);
    std::string out = "{";
    bool first = true;
    for (const auto& [n, v] : entries_) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(n);
        out += ":";
        out += format_double(v);
    }
    out += "}";
    return out;
}

Point Point::parse(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw ParamError("Point::parse: empty literal");
    if (s.front() == '{') {
        if (s.back() != '}') throw ParamError("Point::parse: unterminated '{'");
        Entries entries;
        std::string body = s.substr(1, s.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw ParamError("Point::parse: expected index:value in '" + item + "'");
            }
            try {
                int n = std::stoi(item.substr(0, colon));
                double v = std::stod(item.substr(colon + 1));
                entries[n] = v;
            } catch (const std::exception&) {
                throw ParamError("Point::parse: bad entry '" + item + "'");
            }
        }
        return seq(std::move(entries));
    }
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParamError("Point::parse: trailing characters in '" + s + "'");
        return scalar(v);
    } catch (const ParamError&) {
        throw;
    } catch (const std::exception&) {
        throw ParamError("Point::parse: not a number: '" + s + "'");
    }
}

Point lin_comb(double a, const Point& x, double b, const Point& y) {
    if (x.is_scalar() != y.is_scalar()) {
        throw StructureError("lin_comb: mixed scalar and sequence points");
    }
    if (x.is_scalar()) return Point::scalar(a * x.scalar_value() + b * y.scalar_value());
    Point::Entries out = x.entries();
    for (auto& [n, v] : out) v *= a;
    for (const auto& [n, v] : y.entries()) out[n] += b * v;
    return Point::seq(std::move(out));
}

double point_norm(const Point& p) {
    if (p.is_scalar()) return std::abs(p.scalar_value());
    double best = 0.0;
    for (const auto& [n, v] : p.entries()) best = std::max(best, std::abs(v));
    return best;
}

}  // namespace fixpoint
