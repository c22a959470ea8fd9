#include "qtrack/config.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qtrack/num_format.hpp"
#include "qtrack/sensing.hpp"

namespace qtrack {

ObserverGains SimConfig::observer_gains() const {
    return {k_o, gamma_o, gamma_Omega, PpfParams{xi0_o, xi_inf_o, ell_o, delta_o}};
}

ControllerGains SimConfig::controller_gains() const {
    return {k_w, k_c, k_beta, PpfParams{xi0_a, xi_inf_a, ell_a, delta_a}};
}

DesiredTrajectory::Params SimConfig::trajectory_params() const {
    return {traj_amplitude, traj_frequency, traj_phase, Omega_d0};
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

/// Splits "[a, b, c]" into element strings; elements may themselves be
/// bracketed, so the split respects nesting depth.
std::vector<std::string> split_list(const std::string& value, const std::string& where) {
    const std::string v = trim(value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
        throw std::invalid_argument(where + ": expected a bracketed list, got '" + v + "'");
    }
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const char c = v[i];
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) {
        out.push_back(trim(cur));
    }
    if (depth != 0) {
        throw std::invalid_argument(where + ": unbalanced brackets in '" + v + "'");
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& value, const std::string& where) {
    std::vector<double> out;
    for (const auto& tok : split_list(value, where)) {
        out.push_back(parse_double(tok));
    }
    return out;
}

Vec3 parse_vec3(const std::string& value, const std::string& where) {
    const auto nums = parse_number_list(value, where);
    if (nums.size() != 3) {
        throw std::invalid_argument(where + ": expected 3 entries");
    }
    return {nums[0], nums[1], nums[2]};
}

UnitQuaternion parse_quat(const std::string& value, const std::string& where) {
    const auto nums = parse_number_list(value, where);
    if (nums.size() != 4) {
        throw std::invalid_argument(where + ": expected 4 entries (scalar first)");
    }
    return {nums[0], Vec3(nums[1], nums[2], nums[3])};
}

Mat3 parse_mat3(const std::string& value, const std::string& where) {
    const auto nums = parse_number_list(value, where);
    if (nums.size() == 3) {
        return Vec3(nums[0], nums[1], nums[2]).asDiagonal();
    }
    if (nums.size() == 9) {
        Mat3 m;
        m << nums[0], nums[1], nums[2], nums[3], nums[4], nums[5], nums[6], nums[7], nums[8];
        return m;
    }
    throw std::invalid_argument(where + ": expected 3 (diagonal) or 9 (row-major) entries");
}

std::vector<Vec3> parse_vec3_list(const std::string& value, const std::string& where) {
    std::vector<Vec3> out;
    for (const auto& tok : split_list(value, where)) {
        out.push_back(parse_vec3(tok, where));
    }
    return out;
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"dt", [](SimConfig& c, const std::string& v, const std::string&) { c.dt = parse_double(v); }},
        {"duration", [](SimConfig& c, const std::string& v, const std::string&) { c.duration = parse_double(v); }},
        {"seed",
         [](SimConfig& c, const std::string& v, const std::string& w) {
             const double d = parse_double(v);
             if (d < 0.0 || d != static_cast<double>(static_cast<std::uint64_t>(d))) {
                 throw std::invalid_argument(w + ": seed must be a nonnegative integer");
             }
             c.seed = static_cast<std::uint64_t>(d);
         }},
        {"noise_std", [](SimConfig& c, const std::string& v, const std::string&) { c.noise_std = parse_double(v); }},
        {"inertial_refs",
         [](SimConfig& c, const std::string& v, const std::string& w) { c.inertial_refs = parse_vec3_list(v, w); }},
        {"J", [](SimConfig& c, const std::string& v, const std::string& w) { c.J = parse_mat3(v, w); }},
        {"Q0", [](SimConfig& c, const std::string& v, const std::string& w) { c.Q0 = parse_quat(v, w); }},
        {"Qd0", [](SimConfig& c, const std::string& v, const std::string& w) { c.Qd0 = parse_quat(v, w); }},
        {"Qa0", [](SimConfig& c, const std::string& v, const std::string& w) { c.Qa0 = parse_quat(v, w); }},
        {"Qhat0", [](SimConfig& c, const std::string& v, const std::string& w) { c.Qhat0 = parse_quat(v, w); }},
        {"Omega0", [](SimConfig& c, const std::string& v, const std::string& w) { c.Omega0 = parse_vec3(v, w); }},
        {"Omega_hat0",
         [](SimConfig& c, const std::string& v, const std::string& w) { c.Omega_hat0 = parse_vec3(v, w); }},
        {"Omega_d0", [](SimConfig& c, const std::string& v, const std::string& w) { c.Omega_d0 = parse_vec3(v, w); }},
        {"k_o", [](SimConfig& c, const std::string& v, const std::string&) { c.k_o = parse_double(v); }},
        {"gamma_o", [](SimConfig& c, const std::string& v, const std::string&) { c.gamma_o = parse_double(v); }},
        {"gamma_Omega",
         [](SimConfig& c, const std::string& v, const std::string&) { c.gamma_Omega = parse_double(v); }},
        {"k_w", [](SimConfig& c, const std::string& v, const std::string&) { c.k_w = parse_double(v); }},
        {"k_c", [](SimConfig& c, const std::string& v, const std::string&) { c.k_c = parse_double(v); }},
        {"k_beta", [](SimConfig& c, const std::string& v, const std::string&) { c.k_beta = parse_double(v); }},
        {"xi0_o", [](SimConfig& c, const std::string& v, const std::string&) { c.xi0_o = parse_double(v); }},
        {"xi_inf_o", [](SimConfig& c, const std::string& v, const std::string&) { c.xi_inf_o = parse_double(v); }},
        {"ell_o", [](SimConfig& c, const std::string& v, const std::string&) { c.ell_o = parse_double(v); }},
        {"delta_o", [](SimConfig& c, const std::string& v, const std::string&) { c.delta_o = parse_double(v); }},
        {"xi0_a", [](SimConfig& c, const std::string& v, const std::string&) { c.xi0_a = parse_double(v); }},
        {"xi_inf_a", [](SimConfig& c, const std::string& v, const std::string&) { c.xi_inf_a = parse_double(v); }},
        {"ell_a", [](SimConfig& c, const std::string& v, const std::string&) { c.ell_a = parse_double(v); }},
        {"delta_a", [](SimConfig& c, const std::string& v, const std::string&) { c.delta_a = parse_double(v); }},
        {"epsilon_clamp",
         [](SimConfig& c, const std::string& v, const std::string&) { c.epsilon_clamp = parse_double(v); }},
        {"substeps",
         [](SimConfig& c, const std::string& v, const std::string& w) {
             const double d = parse_double(v);
             if (d < 1.0 || d != static_cast<double>(static_cast<int>(d))) {
                 throw std::invalid_argument(w + ": substeps must be a positive integer");
             }
             c.substeps = static_cast<int>(d);
         }},
        {"tau_limit", [](SimConfig& c, const std::string& v, const std::string&) { c.tau_limit = parse_double(v); }},
        {"c_d", [](SimConfig& c, const std::string& v, const std::string&) { c.c_d = parse_double(v); }},
        {"traj_amplitude",
         [](SimConfig& c, const std::string& v, const std::string& w) { c.traj_amplitude = parse_vec3(v, w); }},
        {"traj_frequency",
         [](SimConfig& c, const std::string& v, const std::string& w) { c.traj_frequency = parse_vec3(v, w); }},
        {"traj_phase",
         [](SimConfig& c, const std::string& v, const std::string& w) { c.traj_phase = parse_vec3(v, w); }},
    };
    return table;
}

std::string fmt_vec3(const Vec3& v) {
    return "[" + format_double(v.x()) + ", " + format_double(v.y()) + ", " +
           format_double(v.z()) + "]";
}

std::string fmt_quat(const UnitQuaternion& q) {
    return "[" + format_double(q.w) + ", " + format_double(q.v.x()) + ", " +
           format_double(q.v.y()) + ", " + format_double(q.v.z()) + "]";
}

std::string fmt_mat3(const Mat3& m) {
    std::string out = "[";
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            if (r != 0 || c != 0) out += ", ";
            out += format_double(m(r, c));
        }
    }
    return out + "]";
}

} // namespace

SimConfig parse_config_text(const std::string& text, const std::string& origin) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw std::invalid_argument(where + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw std::invalid_argument(where + ": unknown key '" + key + "'");
        }
        it->second(cfg, value, where + " (" + key + ")");
    }
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string canonical_config_text(const SimConfig& c) {
    std::ostringstream out;
    out << "dt = " << format_double(c.dt) << "\n";
    out << "duration = " << format_double(c.duration) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "noise_std = " << format_double(c.noise_std) << "\n";
    out << "inertial_refs = [";
    for (std::size_t i = 0; i < c.inertial_refs.size(); ++i) {
        out << (i ? ", " : "") << fmt_vec3(c.inertial_refs[i]);
    }
    out << "]\n";
    out << "J = " << fmt_mat3(c.J) << "\n";
    out << "Q0 = " << fmt_quat(c.Q0) << "\n";
    out << "Qd0 = " << fmt_quat(c.Qd0) << "\n";
    out << "Qa0 = " << fmt_quat(c.Qa0) << "\n";
    out << "Qhat0 = " << fmt_quat(c.Qhat0) << "\n";
    out << "Omega0 = " << fmt_vec3(c.Omega0) << "\n";
    out << "Omega_hat0 = " << fmt_vec3(c.Omega_hat0) << "\n";
    out << "Omega_d0 = " << fmt_vec3(c.Omega_d0) << "\n";
    out << "k_o = " << format_double(c.k_o) << "\n";
    out << "gamma_o = " << format_double(c.gamma_o) << "\n";
    out << "gamma_Omega = " << format_double(c.gamma_Omega) << "\n";
    out << "k_w = " << format_double(c.k_w) << "\n";
    out << "k_c = " << format_double(c.k_c) << "\n";
    out << "k_beta = " << format_double(c.k_beta) << "\n";
    out << "xi0_o = " << format_double(c.xi0_o) << "\n";
    out << "xi_inf_o = " << format_double(c.xi_inf_o) << "\n";
    out << "ell_o = " << format_double(c.ell_o) << "\n";
    out << "delta_o = " << format_double(c.delta_o) << "\n";
    out << "xi0_a = " << format_double(c.xi0_a) << "\n";
    out << "xi_inf_a = " << format_double(c.xi_inf_a) << "\n";
    out << "ell_a = " << format_double(c.ell_a) << "\n";
    out << "delta_a = " << format_double(c.delta_a) << "\n";
    out << "epsilon_clamp = " << format_double(c.epsilon_clamp) << "\n";
    out << "substeps = " << c.substeps << "\n";
    out << "tau_limit = " << format_double(c.tau_limit) << "\n";
    out << "c_d = " << format_double(c.c_d) << "\n";
    out << "traj_amplitude = " << fmt_vec3(c.traj_amplitude) << "\n";
    out << "traj_frequency = " << fmt_vec3(c.traj_frequency) << "\n";
    out << "traj_phase = " << fmt_vec3(c.traj_phase) << "\n";
    return out.str();
}

std::uint64_t config_hash(const SimConfig& cfg) {
    const std::string text = canonical_config_text(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& e : errors) {
        out << "error: " << e << "\n";
    }
    for (const auto& w : warnings) {
        out << "warning: " << w << "\n";
    }
    return out.str();
}

ValidationReport validate(const SimConfig& cfg) {
    ValidationReport rep;
    const auto err = [&](const std::string& m) { rep.errors.push_back(m); };
    const auto warn = [&](const std::string& m) { rep.warnings.push_back(m); };
    const auto positive = [&](double v, const char* name, const char* role) {
        if (!(v > 0.0)) {
            err(std::string(name) + " must be positive (" + role + "); got " + format_double(v));
        }
    };

    if (!(cfg.dt > 0.0)) err("dt must be positive");
    if (!(cfg.duration > cfg.dt)) err("duration must exceed dt");
    if (cfg.noise_std < 0.0) err("noise_std must be nonnegative");
    if (cfg.substeps < 1) err("substeps must be >= 1");
    positive(cfg.epsilon_clamp, "epsilon_clamp", "envelope clamp margin");

    positive(cfg.k_o, "k_o", "observer design constant");
    positive(cfg.gamma_o, "gamma_o", "observer design constant");
    positive(cfg.gamma_Omega, "gamma_Omega", "Lyapunov weight");
    positive(cfg.k_w, "k_w", "controller design constant");
    positive(cfg.k_c, "k_c", "controller design constant");
    positive(cfg.k_beta, "k_beta", "controller design constant");

    const auto check_ppf = [&](const char* ch, double xi0, double xi_inf, double ell,
                               double delta) {
        if (!(xi_inf > 0.0)) err(std::string("xi_inf_") + ch + " must be positive");
        if (!(xi0 > xi_inf)) err(std::string("xi0_") + ch + " must exceed xi_inf_" + ch);
        if (!(ell > 0.0)) err(std::string("ell_") + ch + " must be positive (envelope decay rate)");
        if (!(delta > 0.0)) err(std::string("delta_") + ch + " must be positive (saturation bound)");
    };
    check_ppf("o", cfg.xi0_o, cfg.xi_inf_o, cfg.ell_o, cfg.delta_o);
    check_ppf("a", cfg.xi0_a, cfg.xi_inf_a, cfg.ell_a, cfg.delta_a);

    try {
        cfg.inertia();
    } catch (const std::exception& e) {
        err(std::string("J: ") + e.what());
    }

    if (cfg.inertial_refs.size() < 2) {
        err("inertial_refs: rank condition requires at least two reference vectors");
    } else {
        const Vec3 a = cfg.inertial_refs[0].normalized();
        const Vec3 b = cfg.inertial_refs[1].normalized();
        if (std::abs(a.dot(b)) > 1.0 - 1e-6) {
            err("inertial_refs: rank condition violated, first two references are collinear");
        }
    }

    // Envelope and saturation must start above the actual initial errors.
    try {
        const UnitQuaternion q0 = cfg.Q0.normalized();
        const UnitQuaternion qhat0 = cfg.Qhat0.normalized();
        const UnitQuaternion qd0 = cfg.Qd0.normalized();
        const UnitQuaternion qa0 = cfg.Qa0.normalized();
        const double e_o0 = constrained_error(quat_product(quat_inverse(qhat0), q0).w);
        const UnitQuaternion qc0 = quat_product(quat_inverse(qd0), qhat0);
        const double e_a0 = constrained_error(quat_product(quat_inverse(qa0), qc0).w);
        if (!(cfg.xi0_o > e_o0)) {
            err("xi0_o must exceed the initial observation error e_o(0) = " + format_double(e_o0));
        }
        if (!(cfg.delta_o > e_o0)) {
            err("delta_o must exceed the initial observation error e_o(0) = " + format_double(e_o0));
        }
        if (!(cfg.xi0_a > e_a0)) {
            err("xi0_a must exceed the initial auxiliary error e_a(0) = " + format_double(e_a0));
        }
        if (!(cfg.delta_a > e_a0)) {
            err("delta_a must exceed the initial auxiliary error e_a(0) = " + format_double(e_a0));
        }
    } catch (const std::exception& e) {
        err(std::string("initial quaternions: ") + e.what());
    }

    // Analysis-side gain selections; the reference experiment itself does not
    // satisfy the second one, so these stay warnings.
    if (cfg.k_o < cfg.ell_o) {
        warn("k_o < ell_o: observer gain below the envelope decay rate assumed by the "
             "convergence analysis");
    }
    if (cfg.k_beta < 2.0 * cfg.ell_a) {
        warn("k_beta < 2*ell_a: auxiliary gain below the rate assumed by the convergence "
             "analysis");
    }
    if (DesiredTrajectory(cfg.trajectory_params()).sup_norm_bound() > cfg.c_d) {
        warn("reference trajectory bound exceeds c_d = " + format_double(cfg.c_d));
    }
    if (cfg.tau_limit > 0.0) {
        warn("experimental torque clamp active: tau_limit = " + format_double(cfg.tau_limit));
    }
    return rep;
}

} // namespace qtrack
