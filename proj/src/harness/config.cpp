#include "npl/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <toml.hpp>

#include "npl/constructions.hpp"
#include "npl/errors.hpp"

namespace npl::harness {

namespace {

std::string with_line(const std::string& what, std::optional<std::size_t> line) {
    return line ? "line " + std::to_string(*line) + ": " + what : what;
}

std::optional<std::size_t> line_of(const toml::node& node) {
    const auto& src = node.source();
    if (src.begin.line == 0) return std::nullopt;
    return static_cast<std::size_t>(src.begin.line);
}

enum class Slot { Real, Int, Size };

struct NumericParam {
    const char* key;
    Slot slot;
    void* (*field)(RunConfig&);
};

#define NPL_PARAM(name, slot, expr) \
    NumericParam { name, slot, [](RunConfig& c) -> void* { return &(expr); } }

const std::vector<NumericParam>& numeric_params() {
    static const std::vector<NumericParam> params = {
        NPL_PARAM("problem.a", Slot::Real, c.grid.a),
        NPL_PARAM("problem.b", Slot::Real, c.grid.b),
        NPL_PARAM("problem.radius", Slot::Real, c.grid.radius),
        NPL_PARAM("problem.dimension", Slot::Int, c.grid.dimension),
        NPL_PARAM("problem.nodes", Slot::Size, c.grid.nodes),
        NPL_PARAM("problem.modes", Slot::Size, c.modes),
        NPL_PARAM("problem.alpha", Slot::Real, c.op.alpha),
        NPL_PARAM("problem.mu", Slot::Real, c.op.mu),
        NPL_PARAM("problem.p", Slot::Real, c.nonlinearity.p),
        NPL_PARAM("problem.n", Slot::Int, c.nonlinearity.n),
        NPL_PARAM("problem.q", Slot::Real, c.nonlinearity.q),
        NPL_PARAM("problem.lambda", Slot::Real, c.nonlinearity.lambda),
        NPL_PARAM("stepper.dt0", Slot::Real, c.stepper.dt0),
        NPL_PARAM("stepper.t_end", Slot::Real, c.stepper.t_end),
        NPL_PARAM("stepper.blowup_cap", Slot::Real, c.stepper.blowup_cap),
        NPL_PARAM("stepper.safety", Slot::Real, c.stepper.safety),
        NPL_PARAM("stepper.record_every", Slot::Size, c.stepper.record_every),
        NPL_PARAM("stepper.max_steps", Slot::Size, c.stepper.max_steps),
        NPL_PARAM("initial_data.amplitude", Slot::Real, c.initial.amplitude),
        NPL_PARAM("initial_data.mode", Slot::Int, c.initial.mode),
        NPL_PARAM("initial_data.width", Slot::Real, c.initial.width),
        NPL_PARAM("initial_data.center", Slot::Real, c.initial.center),
        NPL_PARAM("initial_data.lambda", Slot::Real, c.initial.lambda),
        NPL_PARAM("initial_data.t_target", Slot::Real, c.initial.t_target),
        NPL_PARAM("initial_data.t_lambda", Slot::Real, c.initial.t_lambda),
        NPL_PARAM("initial_data.M", Slot::Real, c.initial.M),
        NPL_PARAM("initial_data.k", Slot::Int, c.initial.k),
    };
    return params;
}

#undef NPL_PARAM

void set_numeric(RunConfig& config, std::string_view key, double value, std::optional<std::size_t> line) {
    for (const auto& p : numeric_params()) {
        if (key != p.key) continue;
        if (!std::isfinite(value)) throw ConfigError(std::string(key) + " must be finite", line);
        void* f = p.field(config);
        if (p.slot == Slot::Real) {
            *static_cast<double*>(f) = value;
            return;
        }
        if (value != std::floor(value)) throw ConfigError(std::string(key) + " must be an integer", line);
        if (p.slot == Slot::Int) {
            if (std::abs(value) > std::numeric_limits<int>::max()) throw ConfigError(std::string(key) + " out of range", line);
            *static_cast<int*>(f) = static_cast<int>(value);
        } else {
            if (value < 0.0 || value > 1e15) throw ConfigError(std::string(key) + " out of range", line);
            *static_cast<std::size_t*>(f) = static_cast<std::size_t>(value);
        }
        return;
    }
    throw ConfigError("unknown parameter '" + std::string(key) + "'", line);
}

std::string string_value(const toml::node& node, std::string_view key) {
    if (auto v = node.value<std::string>(); v && node.is_string()) return *v;
    throw ConfigError(std::string(key) + " must be a string", line_of(node));
}

void apply_string(RunConfig& c, const std::string& key, const toml::node& node) {
    const std::string v = string_value(node, key);
    const auto line = line_of(node);
    if (key == "problem.grid") {
        if (v != "interval" && v != "ball") throw ConfigError("problem.grid must be 'interval' or 'ball'", line);
        c.grid.kind = v;
    } else if (key == "problem.nonlinearity") {
        if (v == "power") c.nonlinearity.kind = NonlinearitySpec::Kind::Power;
        else if (v == "choquard") c.nonlinearity.kind = NonlinearitySpec::Kind::Choquard;
        else if (v == "sps") c.nonlinearity.kind = NonlinearitySpec::Kind::Sps;
        else throw ConfigError("problem.nonlinearity must be power, choquard or sps", line);
    } else if (key == "problem.sign") {
        if (v == "minus") c.nonlinearity.sign = NonlinearitySpec::Sign::Minus;
        else if (v == "plus") c.nonlinearity.sign = NonlinearitySpec::Sign::Plus;
        else throw ConfigError("problem.sign must be 'minus' or 'plus'", line);
    } else if (key == "problem.operator") {
        if (v == "spectral") c.op.flavor = OperatorSpec::Flavor::Spectral;
        else if (v == "restricted_1d") c.op.flavor = OperatorSpec::Flavor::Restricted1D;
        else throw ConfigError("problem.operator must be 'spectral' or 'restricted_1d'", line);
    } else if (key == "stepper.scheme") {
        if (v == "etd2rk") c.stepper.scheme = StepperConfig::Scheme::Etd2rk;
        else if (v == "etd1") c.stepper.scheme = StepperConfig::Scheme::Etd1;
        else throw ConfigError("stepper.scheme must be 'etd2rk' or 'etd1'", line);
    } else if (key == "initial_data.kind") {
        static const char* kinds[] = {"sine", "gaussian", "modes", "steady_1d", "periodic_1d", "rescaled_1d", "bumps"};
        for (const char* k : kinds) {
            if (v == k) {
                c.initial.kind = v;
                return;
            }
        }
        throw ConfigError("unknown initial_data.kind '" + v + "'", line);
    } else {
        throw ConfigError(key + " does not take a string", line);
    }
}

void apply_section(RunConfig& c, const std::string& section, const toml::table& table) {
    for (const auto& [k, node] : table) {
        const std::string key = section + "." + std::string(k.str());
        const auto line = line_of(node);
        if (node.is_integer() || node.is_floating_point()) {
            set_numeric(c, key, *node.value<double>(), line);
        } else if (node.is_string()) {
            apply_string(c, key, node);
        } else if (node.is_boolean()) {
            if (key != "stepper.store_fields") throw ConfigError(key + " does not take a boolean", line);
            c.stepper.store_fields = *node.value<bool>();
        } else if (node.is_array()) {
            if (key != "initial_data.coefficients") throw ConfigError(key + " does not take a list", line);
            c.initial.coefficients.clear();
            for (const auto& e : *node.as_array()) {
                auto v = e.value<double>();
                if (!v || !(e.is_integer() || e.is_floating_point())) {
                    throw ConfigError("initial_data.coefficients must hold numbers", line_of(e));
                }
                c.initial.coefficients.push_back(*v);
            }
        } else {
            throw ConfigError("unsupported value for " + key, line);
        }
    }
}

toml::table parse_toml(std::string_view text, std::string_view source) {
    try {
        return toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        throw ConfigError(std::string(e.description()), static_cast<std::size_t>(e.source().begin.line));
    }
}

RunConfig run_from_table(const toml::table& root, bool allow_sweep) {
    RunConfig c;
    for (const auto& [k, node] : root) {
        const std::string key(k.str());
        const auto line = line_of(node);
        if (key == "id") {
            c.id = string_value(node, "id");
        } else if (key == "problem" || key == "stepper" || key == "initial_data") {
            if (!node.is_table()) throw ConfigError("[" + key + "] must be a table", line);
            apply_section(c, key, *node.as_table());
        } else if (key == "sweep" && allow_sweep) {
            continue;
        } else {
            throw ConfigError("unknown key '" + key + "'", line);
        }
    }
    return c;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::optional<std::size_t> line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
    return run_from_table(parse_toml(text, source), false);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(read_file(path), path.string());
}

SweepConfig parse_sweep_config(std::string_view text, std::string_view source) {
    const auto root = parse_toml(text, source);
    SweepConfig s;
    s.base = run_from_table(root, true);
    const auto* sweep = root.get("sweep");
    if (!sweep) throw ConfigError("sweep config needs a [sweep] table");
    if (!sweep->is_table()) throw ConfigError("[sweep] must be a table", line_of(*sweep));
    for (const auto& [k, node] : *sweep->as_table()) {
        SweepAxis axis;
        axis.key = std::string(k.str());
        const auto line = line_of(node);
        if (!node.is_array()) throw ConfigError("sweep axis " + axis.key + " must be a list", line);
        for (const auto& e : *node.as_array()) {
            if (!(e.is_integer() || e.is_floating_point())) {
                throw ConfigError("sweep axis " + axis.key + " must hold numbers", line_of(e));
            }
            axis.values.push_back(*e.value<double>());
        }
        // Validate the key and the value types against a scratch copy.
        RunConfig scratch = s.base;
        for (double v : axis.values) set_numeric(scratch, axis.key, v, line);
        if (axis.values.empty()) set_numeric(scratch, axis.key, 0.0, line);
        s.axes.push_back(std::move(axis));
    }
    if (s.size() > max_sweep_points) {
        throw ConfigError("sweep grid has " + std::to_string(s.size()) + " points, limit is " +
                          std::to_string(max_sweep_points));
    }
    return s;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    return parse_sweep_config(read_file(path), path.string());
}

std::size_t SweepConfig::size() const {
    std::size_t n = 1;
    for (const auto& a : axes) {
        if (a.values.empty()) return 0;
        if (n > max_sweep_points) return n;  // already over the cap
        n *= a.values.size();
    }
    return n;
}

std::vector<double> SweepConfig::values(std::size_t index) const {
    std::vector<double> v(axes.size());
    for (std::size_t j = axes.size(); j-- > 0;) {
        const std::size_t m = axes[j].values.size();
        v[j] = axes[j].values[index % m];
        index /= m;
    }
    return v;
}

RunConfig SweepConfig::point(std::size_t index) const {
    RunConfig c = base;
    const auto v = values(index);
    for (std::size_t j = 0; j < axes.size(); ++j) set_numeric(c, axes[j].key, v[j], std::nullopt);
    c.id = base.id + "-" + std::to_string(index);
    return c;
}

void set_parameter(RunConfig& config, std::string_view key, double value) {
    set_numeric(config, key, value, std::nullopt);
}

double get_parameter(const RunConfig& config, std::string_view key) {
    for (const auto& p : numeric_params()) {
        if (key != p.key) continue;
        void* f = p.field(const_cast<RunConfig&>(config));
        switch (p.slot) {
            case Slot::Real: return *static_cast<double*>(f);
            case Slot::Int: return *static_cast<int*>(f);
            case Slot::Size: return static_cast<double>(*static_cast<std::size_t*>(f));
        }
    }
    throw ConfigError("unknown parameter '" + std::string(key) + "'");
}

std::vector<ParameterInfo> parameter_info() {
    std::vector<ParameterInfo> out;
    for (const auto& p : numeric_params()) out.push_back({p.key, p.slot != Slot::Real});
    return out;
}

ProblemSpec make_problem(const RunConfig& config) {
    const auto& g = config.grid;
    const GridPtr grid = g.kind == "ball" ? Grid::ball(g.radius, g.dimension, g.nodes) : Grid::interval(g.a, g.b, g.nodes);
    std::size_t modes = config.modes;
    if (modes == 0) modes = std::min((g.nodes - 1) / 3, g.nodes / 2);
    ProblemSpec problem{grid, config.op, config.nonlinearity, modes};
    problem.validate();
    return problem;
}

Field make_initial_data(const RunConfig& config, const ProblemSpec& problem) {
    const auto& d = config.initial;
    const GridPtr& grid = problem.grid;
    const double pi = std::numbers::pi;
    if (d.kind == "sine") {
        if (d.mode < 1) throw InvalidArgument("initial_data.mode must be >= 1");
        if (grid->is_radial()) {
            const double w = d.mode * pi / grid->radius();
            return Field::from_function(grid, [&](double r) { return r == 0.0 ? d.amplitude : d.amplitude * std::sin(w * r) / (w * r); });
        }
        const double w = d.mode * pi / grid->length();
        const double a = grid->lower();
        return Field::from_function(grid, [&](double x) { return d.amplitude * std::sin(w * (x - a)); });
    }
    if (d.kind == "gaussian") {
        if (!(d.width > 0.0)) throw InvalidArgument("initial_data.width must be positive");
        const double c = grid->is_radial() ? 0.0 : d.center;
        return Field::from_function(grid, [&](double x) {
            const double z = (x - c) / d.width;
            return d.amplitude * std::exp(-z * z);
        });
    }
    if (d.kind == "modes") {
        const auto basis = problem.make_basis();
        if (d.coefficients.empty() || d.coefficients.size() > basis->modes()) {
            throw InvalidArgument("initial_data.coefficients needs between 1 and K entries");
        }
        std::vector<double> c(basis->modes(), 0.0);
        std::copy(d.coefficients.begin(), d.coefficients.end(), c.begin());
        return basis->synthesize(c);
    }
    if (d.kind == "steady_1d" || d.kind == "periodic_1d" || d.kind == "rescaled_1d") {
        if (problem.nonlinearity.kind != NonlinearitySpec::Kind::Power) {
            throw InvalidArgument(d.kind + " data needs the power nonlinearity");
        }
        const double p = problem.nonlinearity.p;
        const auto v1 = steady_state_1d(p);
        if (d.kind == "steady_1d") return v1.sample(grid) * d.lambda;
        const Field u1 = odd_periodic_extension(v1, grid);
        if (d.kind == "periodic_1d") return u1 * d.lambda;
        if (!(d.t_target > 0.0 && d.t_lambda > 0.0)) throw InvalidArgument("t_target and t_lambda must be positive");
        const double alpha = std::sqrt(d.t_lambda / d.t_target);
        const double amp = std::pow(alpha, 2.0 / (p - 1.0)) * d.lambda;
        return Field::from_function(grid, [&](double x) {
            double m = std::fmod(alpha * x, 2.0);
            if (m < 0.0) m += 2.0;
            return amp * (m <= 1.0 ? v1.value(m) : -v1.value(2.0 - m));
        });
    }
    if (d.kind == "bumps") {
        const auto fam = bump_family(d.k, d.M, problem.nonlinearity.q);
        std::vector<double> c = d.coefficients;
        if (c.empty()) c.assign(static_cast<std::size_t>(d.k), 1.0 / d.k);
        return fam.combination(c, grid) * d.amplitude;
    }
    throw InvalidArgument("unknown initial data kind '" + d.kind + "'");
}

}  // namespace npl::harness
