#include "mdet/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mdet/errors.hpp"
#include "mdet/log_math.hpp"

namespace mdet {

std::string_view to_string(SupportKind kind) {
    return kind == SupportKind::Hamburger ? "HAMBURGER" : "STIELTJES";
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::MDet: return "MDET";
        case Classification::MIndet: return "MINDET";
        case Classification::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

namespace {

constexpr int kTailGridPoints = 1000;
constexpr double kTailGridSpan = 1e6;

void check_tail(const LogDensityFn& log_f, double x0, double sign, const std::string& label) {
    const double ratio = std::pow(kTailGridSpan, 1.0 / (kTailGridPoints - 1));
    double x = x0;
    double prev = 0.0;
    int prev_dir = 0;
    int changes = 0;
    for (int i = 0; i < kTailGridPoints; ++i, x *= ratio) {
        const double v = log_f(sign * x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "density '" << label << "' is not positive and finite at x = " << sign * x
               << " inside its tail region";
            throw InvalidArgument(os.str());
        }
        if (i > 0) {
            const int dir = v > prev ? 1 : (v < prev ? -1 : 0);
            if (dir != 0) {
                if (prev_dir != 0 && dir != prev_dir) ++changes;
                prev_dir = dir;
            }
        }
        prev = v;
    }
    if (changes > 1) {
        throw InvalidArgument("density '" + label + "' oscillates in its tail");
    }
}

}  // namespace

TailDensity::TailDensity(SupportKind support, double x0, LogDensityFn log_f, std::string label,
                         LogStepFn log_step, bool normalized)
    : support_(support),
      x0_(x0),
      log_f_(std::move(log_f)),
      log_step_(std::move(log_step)),
      label_(std::move(label)),
      normalized_(normalized) {
    if (!(x0_ > 0.0) || !std::isfinite(x0_)) {
        throw InvalidArgument("tail threshold x0 must be positive");
    }
    if (!log_f_) throw InvalidArgument("log-density function is empty");
    check_tail(log_f_, x0_, 1.0, label_);
    if (support_ == SupportKind::Hamburger) check_tail(log_f_, x0_, -1.0, label_);
}

double TailDensity::log_density(double x) const {
    if (support_ == SupportKind::Stieltjes && x < 0.0) {
        std::ostringstream os;
        os << "STIELTJES density '" << label_ << "' evaluated at negative x = " << x;
        throw DomainError(os.str());
    }
    return log_f_(x);
}

double TailDensity::log_ratio(double x, double h) const {
    if (support_ == SupportKind::Stieltjes && (x < 0.0 || x + h < 0.0)) {
        throw DomainError("STIELTJES density ratio evaluated at negative argument");
    }
    if (log_step_) return log_step_(x, h);
    return log_f_(x + h) - log_f_(x);
}

TailDensity TailDensity::scaled(double log_c, bool normalized) const {
    auto f = log_f_;
    // Ratios keep using the unscaled function so they stay bit-identical.
    LogStepFn step = log_step_;
    if (!step) step = [f](double x, double h) { return f(x + h) - f(x); };
    return TailDensity(support_, x0_, [f, log_c](double x) { return f(x) + log_c; }, label_,
                       std::move(step), normalized);
}

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double xlogy(double a, double x) { return a == 0.0 ? 0.0 : a * std::log(x); }

// log(1 + h/x) with the x == 0 limit handled by the caller.
double log_rel(double x, double h) { return std::log1p(h / x); }

struct Family {
    LogDensityFn log_f;
    LogStepFn step;
    LogMomentFn moment;  // one-sided moment of the half-line density (Plus)
    Classification half_line_class = Classification::Unknown;
    Classification symmetric_class = Classification::Unknown;
    std::string source;
};

void require(bool ok, std::string_view name, std::string_view what) {
    if (!ok) throw InvalidArgument(std::string(name) + ": " + std::string(what));
}

Family gamma_family(double k, double theta, Classification cls, std::string source) {
    const double norm = -k * std::log(theta) - std::lgamma(k);
    Family f;
    f.log_f = [k, theta, norm](double x) {
        if (x == 0.0) return k < 1.0 ? kPosInf : (k == 1.0 ? norm : kNegInf);
        return xlogy(k - 1.0, x) - x / theta + norm;
    };
    f.step = [k, theta](double x, double h) {
        if (x == 0.0) return kNegInf;
        return (k - 1.0) * log_rel(x, h) - h / theta;
    };
    f.moment = [k, theta](int n, Side) {
        return std::lgamma(k + n) - std::lgamma(k) + n * std::log(theta);
    };
    f.half_line_class = cls;
    f.symmetric_class = cls;
    f.source = std::move(source);
    return f;
}

Family generalized_gamma_family(double a, double d, double p) {
    const double norm = std::log(p) - d * std::log(a) - std::lgamma(d / p);
    Family f;
    f.log_f = [a, d, p, norm](double x) {
        if (x == 0.0) return d < 1.0 ? kPosInf : (d == 1.0 ? norm : kNegInf);
        return xlogy(d - 1.0, x) - std::pow(x / a, p) + norm;
    };
    f.step = [a, d, p](double x, double h) {
        if (x == 0.0) return kNegInf;
        const double r = log_rel(x, h);
        return (d - 1.0) * r - std::pow(x / a, p) * std::expm1(p * r);
    };
    f.moment = [a, d, p](int n, Side) {
        return n * std::log(a) + std::lgamma((d + n) / p) - std::lgamma(d / p);
    };
    return f;
}

Family lookup(std::string_view name, std::span<const double> q) {
    Family f;
    if (name == "normal") {
        require(q.size() == 2, name, "expects parameters mean,sd");
        const double mu = q[0], sigma = q[1];
        require(std::isfinite(mu), name, "mean must be finite");
        require(sigma > 0.0, name, "sd must be positive");
        const double norm = -std::log(sigma) - kLogSqrt2Pi;
        f.log_f = [mu, sigma, norm](double x) {
            const double z = (x - mu) / sigma;
            return -0.5 * z * z + norm;
        };
        f.step = [mu, sigma](double x, double h) {
            return -(2.0 * (x - mu) + h) * h / (2.0 * sigma * sigma);
        };
        if (mu == 0.0) {
            f.moment = [sigma](int n, Side) {
                return n * std::log(sigma) + 0.5 * n * std::numbers::ln2 + std::lgamma(0.5 * (n + 1)) -
                       std::numbers::ln2 - 0.5 * std::log(std::numbers::pi);
            };
        }
        f.symmetric_class = Classification::MDet;
        f.source = "Carleman (C_H): m_2n = (2n-1)!! sd^2n";
        return f;
    }
    if (name == "half_normal") {
        require(q.size() == 1, name, "expects parameter sd");
        const double sigma = q[0];
        require(sigma > 0.0, name, "sd must be positive");
        const double norm = std::numbers::ln2 - std::log(sigma) - kLogSqrt2Pi;
        f.log_f = [sigma, norm](double x) {
            const double z = x / sigma;
            return -0.5 * z * z + norm;
        };
        f.step = [sigma](double x, double h) { return -(2.0 * x + h) * h / (2.0 * sigma * sigma); };
        f.moment = [sigma](int n, Side) {
            return n * std::log(sigma) + 0.5 * n * std::numbers::ln2 + std::lgamma(0.5 * (n + 1)) -
                   0.5 * std::log(std::numbers::pi);
        };
        f.half_line_class = Classification::MDet;
        f.symmetric_class = Classification::MDet;
        f.source = "Carleman (C_S): m_n^(-1/2n) ~ n^(-1/4)";
        return f;
    }
    if (name == "exponential") {
        require(q.size() == 1, name, "expects parameter rate");
        require(q[0] > 0.0, name, "rate must be positive");
        return gamma_family(1.0, 1.0 / q[0], Classification::MDet, "Carleman (C_S): m_n = n!/rate^n");
    }
    if (name == "gamma") {
        require(q.size() == 2, name, "expects parameters shape,scale");
        require(q[0] > 0.0, name, "shape must be positive");
        require(q[1] > 0.0, name, "scale must be positive");
        return gamma_family(q[0], q[1], Classification::MDet,
                            "Carleman (C_S): m_n = Gamma(k+n)/Gamma(k) scale^n");
    }
    if (name == "chi_squared") {
        require(q.size() == 1, name, "expects parameter dof");
        require(q[0] > 0.0, name, "degrees of freedom must be positive");
        return gamma_family(0.5 * q[0], 2.0, Classification::MDet,
                            "Carleman (C_S): gamma(k/2, 2) moments");
    }
    if (name == "lognormal") {
        require(q.size() == 2, name, "expects parameters mu,sigma");
        const double mu = q[0], sigma = q[1];
        require(std::isfinite(mu), name, "mu must be finite");
        require(sigma > 0.0, name, "sigma must be positive");
        const double norm = -std::log(sigma) - kLogSqrt2Pi;
        f.log_f = [mu, sigma, norm](double x) {
            if (x == 0.0) return kNegInf;
            const double lx = std::log(x);
            const double z = (lx - mu) / sigma;
            return -0.5 * z * z - lx + norm;
        };
        f.step = [mu, sigma](double x, double h) {
            const double d = std::log1p(h / x);
            const double c = std::log(x) - mu;
            return -d * (d + 2.0 * c) / (2.0 * sigma * sigma) - d;
        };
        f.moment = [mu, sigma](int n, Side) { return n * mu + 0.5 * n * n * sigma * sigma; };
        f.half_line_class = Classification::MIndet;
        f.symmetric_class = Classification::MIndet;
        f.source = "Heyde (1963); Stoyanov (2013): lognormal is M-indet";
        return f;
    }
    if (name == "weibull") {
        require(q.size() == 2, name, "expects parameters shape,scale");
        const double k = q[0], lambda = q[1];
        require(k > 0.0, name, "shape must be positive");
        require(lambda > 0.0, name, "scale must be positive");
        f = generalized_gamma_family(lambda, k, k);
        f.half_line_class = k >= 0.5 ? Classification::MDet : Classification::MIndet;
        f.symmetric_class = k >= 1.0 ? Classification::MDet : Classification::MIndet;
        f.source = "Stoyanov (2013): Weibull M-det on R+ iff shape >= 1/2; symmetric on R iff shape >= 1";
        return f;
    }
    if (name == "generalized_gamma") {
        require(q.size() == 3, name, "expects parameters scale,d,p");
        require(q[0] > 0.0 && q[1] > 0.0 && q[2] > 0.0, name, "parameters must be positive");
        f = generalized_gamma_family(q[0], q[1], q[2]);
        f.half_line_class = q[2] >= 0.5 ? Classification::MDet : Classification::MIndet;
        f.symmetric_class = q[2] >= 1.0 ? Classification::MDet : Classification::MIndet;
        f.source = "Pakes et al. (2001): generalized gamma M-det on R+ iff p >= 1/2; symmetric on R iff p >= 1";
        return f;
    }
    throw InvalidArgument("unknown catalog density '" + std::string(name) + "'");
}

std::string make_label(std::string_view name, std::span<const double> params) {
    std::ostringstream os;
    os << name << '(';
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
    os << ')';
    return os.str();
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"normal", "half_normal", "exponential", "gamma", "lognormal", "chi_squared", "weibull",
            "generalized_gamma"};
}

std::vector<double> catalog_default_params(std::string_view name) {
    if (name == "normal") return {0.0, 1.0};
    if (name == "half_normal") return {1.0};
    if (name == "exponential") return {1.0};
    if (name == "gamma") return {2.0, 1.0};
    if (name == "lognormal") return {0.0, 1.0};
    if (name == "chi_squared") return {1.0};
    if (name == "weibull") return {2.0, 1.0};
    if (name == "generalized_gamma") return {1.0, 2.0, 2.0};
    throw InvalidArgument("unknown catalog density '" + std::string(name) + "'");
}

CatalogEntry catalog_density(std::string_view name, std::span<const double> params,
                             std::optional<SupportKind> support) {
    std::vector<double> q(params.begin(), params.end());
    if (q.empty()) q = catalog_default_params(name);
    Family fam = lookup(name, q);
    const bool natural_full_line = name == "normal";
    const SupportKind kind = support.value_or(natural_full_line ? SupportKind::Hamburger
                                                                : SupportKind::Stieltjes);
    std::string label = make_label(name, q);

    if (natural_full_line && kind == SupportKind::Stieltjes) {
        throw InvalidArgument("normal is a full-line density; use half_normal on R+");
    }
    if (natural_full_line || kind == SupportKind::Stieltjes) {
        TailDensity d(kind, 1.0, fam.log_f, label, fam.step);
        return CatalogEntry{std::string(name), q, std::move(d), fam.moment,
                            natural_full_line ? fam.symmetric_class : fam.half_line_class,
                            fam.source};
    }

    // Symmetric extension of a half-line family: f(x) = g(|x|) / 2.
    auto g = fam.log_f;
    auto g_step = fam.step;
    LogDensityFn log_f = [g](double x) { return g(std::fabs(x)) - std::numbers::ln2; };
    LogStepFn step = [g, g_step](double x, double h) {
        const double y = x + h;
        if ((x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0)) {
            return g_step(std::fabs(x), x > 0.0 ? h : -h);
        }
        return g(std::fabs(y)) - g(std::fabs(x));
    };
    LogMomentFn moment;
    if (fam.moment) {
        auto m = fam.moment;
        moment = [m](int n, Side s) { return m(n, s) - std::numbers::ln2; };
    }
    TailDensity d(SupportKind::Hamburger, 1.0, log_f, "symmetric " + label, step);
    return CatalogEntry{std::string(name), q, std::move(d), moment, fam.symmetric_class,
                        fam.source};
}

std::pair<std::string, std::vector<double>> parse_dist_arg(std::string_view arg) {
    const auto colon = arg.find(':');
    std::string name(arg.substr(0, colon));
    std::vector<double> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = arg.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            std::string tok(rest.substr(0, comma));
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != tok.size()) {
                throw InvalidArgument("bad parameter '" + tok + "' in --dist " + std::string(arg));
            }
            params.push_back(v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    return {name, params};
}

}  // namespace mdet
