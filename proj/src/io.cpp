#include "rholab/io.hpp"

#include <fstream>
#include <sstream>

namespace rholab::io {

std::string tool_version() { return "1.0.0"; }

ordered_json params_json(const Params& params) {
    ordered_json j;
    j["m"] = params.alphabet_size;
    j["k"] = params.arity;
    j["state_count"] = params.state_count;
    return j;
}

ordered_json summary_json(const stats::StatSummary& summary) {
    ordered_json j;
    j["n"] = summary.n;
    j["mean"] = summary.mean;
    j["se_mean"] = summary.se_mean;
    j["variance"] = summary.variance;
    j["se_variance"] = summary.se_variance;
    if (summary.ks) {
        j["ks_d"] = summary.ks->d;
        j["ks_p_value"] = summary.ks->p_value;
        j["ks_p_approximate"] = summary.ks->approximate;
    }
    for (const auto& [key, value] : summary.extra) j[key] = value;
    return j;
}

void write_jsonl(std::ostream& out, const std::vector<seqsim::TrialRecord>& records,
                 bool hazard) {
    for (const seqsim::TrialRecord& rec : records) {
        ordered_json j;
        j["trial"] = rec.trial;
        j["mu"] = rec.rho.mu;
        j["tau"] = rec.rho.tau;
        j["period"] = rec.rho.period;
        if (hazard) {
            j["h_total"] = rec.h_total;
            j["H_final"] = rec.H_final;
        }
        out << j.dump() << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<seqsim::TrialRecord>& records,
               bool hazard) {
    out << (hazard ? "trial,mu,tau,period,h_total,H_final" : "trial,mu,tau,period") << '\n';
    for (const seqsim::TrialRecord& rec : records) {
        out << rec.trial << ',' << rec.rho.mu << ',' << rec.rho.tau << ',' << rec.rho.period;
        if (hazard) {
            // Round-trip double formatting via the JSON serializer keeps CSV
            // and JSONL byte-consistent for the same values.
            out << ',' << ordered_json(rec.h_total).dump() << ','
                << ordered_json(rec.H_final).dump();
        }
        out << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " +
                                     path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << f.rdbuf();
    if (f.bad()) throw std::runtime_error("read failed for " + path.string());
    return std::move(buf).str();
}

}  // namespace rholab::io
