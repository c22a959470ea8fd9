#include "qtrack/csv_log.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "qtrack/num_format.hpp"

namespace qtrack {

namespace {

// One row is flattened into this fixed column list; quaternions scalar-first.
const char* const kColumns[] = {
    "k", "t",
    "q0", "q1", "q2", "q3",
    "omega_x", "omega_y", "omega_z",
    "qd0", "qd1", "qd2", "qd3",
    "omegad_x", "omegad_y", "omegad_z",
    "qy0", "qy1", "qy2", "qy3",
    "qhat0", "qhat1", "qhat2", "qhat3",
    "omegahat_x", "omegahat_y", "omegahat_z",
    "qa0", "qa1", "qa2", "qa3",
    "q_tilde_o0", "q_tilde_o_norm",
    "q_tilde_c0", "q_tilde_c_norm",
    "q_tilde_a0", "q_tilde_a_norm",
    "e_o", "xi_o", "E_o", "Delta_o",
    "e_a", "xi_a", "E_a", "Delta_a",
    "w_omega_x", "w_omega_y", "w_omega_z",
    "w_tau_x", "w_tau_y", "w_tau_z",
    "beta_a_x", "beta_a_y", "beta_a_z",
    "w_c_x", "w_c_y", "w_c_z",
    "tau_x", "tau_y", "tau_z",
    "omega_tilde_o_norm", "omega_tilde_c_norm",
    "v_o", "l_c",
    "clamp_active_o", "clamp_active_a",
};
constexpr std::size_t kColumnCount = sizeof(kColumns) / sizeof(kColumns[0]);

void flatten(const SimLogRecord& r, double* out) {
    std::size_t i = 0;
    const auto put = [&](double v) { out[i++] = v; };
    const auto put_quat = [&](const UnitQuaternion& q) {
        put(q.w);
        put(q.v.x());
        put(q.v.y());
        put(q.v.z());
    };
    const auto put_vec = [&](const Vec3& v) {
        put(v.x());
        put(v.y());
        put(v.z());
    };
    put(static_cast<double>(r.k));
    put(r.t);
    put_quat(r.q);
    put_vec(r.omega);
    put_quat(r.q_d);
    put_vec(r.omega_d);
    put_quat(r.q_y);
    put_quat(r.q_hat);
    put_vec(r.omega_hat);
    put_quat(r.q_a);
    put(r.q_tilde_o0);
    put(r.q_tilde_o_norm);
    put(r.q_tilde_c0);
    put(r.q_tilde_c_norm);
    put(r.q_tilde_a0);
    put(r.q_tilde_a_norm);
    put(r.e_o);
    put(r.xi_o);
    put(r.E_o);
    put(r.Delta_o);
    put(r.e_a);
    put(r.xi_a);
    put(r.E_a);
    put(r.Delta_a);
    put_vec(r.w_omega);
    put_vec(r.w_tau);
    put_vec(r.beta_a);
    put_vec(r.w_c);
    put_vec(r.tau);
    put(r.omega_tilde_o_norm);
    put(r.omega_tilde_c_norm);
    put(r.v_o);
    put(r.l_c);
    put(r.clamp_active_o ? 1.0 : 0.0);
    put(r.clamp_active_a ? 1.0 : 0.0);
}

SimLogRecord unflatten(const double* in) {
    SimLogRecord r;
    std::size_t i = 0;
    const auto get = [&]() { return in[i++]; };
    const auto get_quat = [&]() {
        UnitQuaternion q;
        q.w = get();
        q.v.x() = get();
        q.v.y() = get();
        q.v.z() = get();
        return q;
    };
    const auto get_vec = [&]() {
        Vec3 v;
        v.x() = get();
        v.y() = get();
        v.z() = get();
        return v;
    };
    r.k = static_cast<std::int64_t>(get());
    r.t = get();
    r.q = get_quat();
    r.omega = get_vec();
    r.q_d = get_quat();
    r.omega_d = get_vec();
    r.q_y = get_quat();
    r.q_hat = get_quat();
    r.omega_hat = get_vec();
    r.q_a = get_quat();
    r.q_tilde_o0 = get();
    r.q_tilde_o_norm = get();
    r.q_tilde_c0 = get();
    r.q_tilde_c_norm = get();
    r.q_tilde_a0 = get();
    r.q_tilde_a_norm = get();
    r.e_o = get();
    r.xi_o = get();
    r.E_o = get();
    r.Delta_o = get();
    r.e_a = get();
    r.xi_a = get();
    r.E_a = get();
    r.Delta_a = get();
    r.w_omega = get_vec();
    r.w_tau = get_vec();
    r.beta_a = get_vec();
    r.w_c = get_vec();
    r.tau = get_vec();
    r.omega_tilde_o_norm = get();
    r.omega_tilde_c_norm = get();
    r.v_o = get();
    r.l_c = get();
    r.clamp_active_o = get() != 0.0;
    r.clamp_active_a = get() != 0.0;
    return r;
}

} // namespace

std::string csv_header() {
    std::string out;
    for (std::size_t i = 0; i < kColumnCount; ++i) {
        if (i) out += ',';
        out += kColumns[i];
    }
    return out;
}

void write_log(const std::vector<SimLogRecord>& records, std::ostream& out,
               const SimConfig& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "0x%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    out << "# tool_version=" << kToolVersion << "\n";
    out << "# seed=" << cfg.seed << "\n";
    out << "# config_hash=" << hash << "\n";
    out << csv_header() << "\n";

    double row[kColumnCount];
    for (const auto& rec : records) {
        flatten(rec, row);
        // k and the clamp flags are integral; everything else is a double.
        out << rec.k;
        for (std::size_t i = 1; i < kColumnCount; ++i) {
            out << ',';
            if (i >= kColumnCount - 2) {
                out << (row[i] != 0.0 ? '1' : '0');
            } else {
                out << format_double(row[i]);
            }
        }
        out << "\n";
    }
}

void write_log(const std::vector<SimLogRecord>& records, const std::string& path,
               const SimConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing: " +
                                 std::strerror(errno));
    }
    write_log(records, out, cfg);
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
    }
}

std::vector<SimLogRecord> read_log(std::istream& in) {
    std::vector<SimLogRecord> records;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!saw_header) {
            if (line != csv_header()) {
                throw std::runtime_error("unexpected CSV header: " + line);
            }
            saw_header = true;
            continue;
        }
        double row[kColumnCount];
        std::size_t col = 0;
        std::size_t pos = 0;
        while (col < kColumnCount) {
            const std::size_t next = line.find(',', pos);
            const std::string_view cell(line.data() + pos, (next == std::string::npos
                                                                ? line.size()
                                                                : next) - pos);
            row[col++] = parse_double(cell);
            if (next == std::string::npos) {
                break;
            }
            pos = next + 1;
        }
        if (col != kColumnCount) {
            throw std::runtime_error("short CSV row: " + line);
        }
        records.push_back(unflatten(row));
    }
    if (!saw_header) {
        throw std::runtime_error("CSV has no header row");
    }
    return records;
}

std::vector<SimLogRecord> read_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading: " +
                                 std::strerror(errno));
    }
    return read_log(in);
}

} // namespace qtrack
