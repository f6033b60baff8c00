// glab: batch front end for convex-body descriptors and identity checks.
//
// Exit codes: 0 success, 2 malformed input document, 3 unsupported
// body/parameter combination, 4 identity verdict failure, 1 internal error.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "glab/descriptors.hpp"
#include "glab/verify.hpp"

namespace {

using glab::Json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitVerdict = 4;

Eigen::MatrixXd vectors_from_json(const Json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) throw glab::SchemaError(path + ": expected a non-empty array");
    const auto& first = arr[0];
    if (!first.is_array() || first.empty()) throw glab::SchemaError(path + "[0]: expected an array of numbers");
    Eigen::Index d = static_cast<Eigen::Index>(first.size());
    Eigen::MatrixXd out(d, static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& row = arr[i];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
            throw glab::SchemaError(path + "[" + std::to_string(i) + "]: expected " + std::to_string(d) + " numbers");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number())
                throw glab::SchemaError(path + "[" + std::to_string(i) + "][" + std::to_string(c) + "]: expected number");
            out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) = row[c].get<double>();
        }
    }
    return out;
}

glab::Body load_body(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw glab::SchemaError("body spec: cannot open " + path);
    Json doc;
    try {
        doc = Json::parse(is);
    } catch (const std::exception& e) {
        throw glab::SchemaError("body spec: invalid JSON in " + path + ": " + e.what());
    }
    if (!doc.contains("type") || !doc["type"].is_string()) throw glab::SchemaError("type: expected string");
    std::string type = doc["type"].get<std::string>();
    if (type == "zonotope") {
        if (!doc.contains("generators")) throw glab::SchemaError("generators: missing");
        return glab::make_zonotope(vectors_from_json(doc["generators"], "generators"));
    }
    if (type == "ball") {
        if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw glab::SchemaError("dim: expected integer");
        if (!doc.contains("radius") || !doc["radius"].is_number()) throw glab::SchemaError("radius: expected number");
        return glab::make_ball(doc["dim"].get<int>(), doc["radius"].get<double>());
    }
    if (type == "polytope") {
        if (!doc.contains("vertices")) throw glab::SchemaError("vertices: missing");
        return glab::make_polytope(vectors_from_json(doc["vertices"], "vertices"));
    }
    throw glab::SchemaError("type: expected one of zonotope|ball|polytope");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw glab::Error("cannot open for writing: " + path);
    os << text;
}

int cmd_compute(const std::string& descriptor, const std::string& body_path, int d, int j, int k, long samples,
                int inner, std::uint64_t seed, const std::string& out) {
    glab::Body body = load_body(body_path);
    if (glab::ambient_dim(body) != d)
        throw glab::SchemaError("body spec: dim does not match --d");
    glab::DescriptorConfig cfg{d, j, samples, inner, seed, descriptor};
    glab::EmpiricalMeasure m = [&] {
        if (descriptor == "flag") return glab::flag_measure(body, cfg);
        if (descriptor == "gamma") return glab::grassmann_measure(body, cfg);
        if (descriptor == "tilde-gamma") return glab::tilde_gamma(body, cfg);
        if (descriptor == "rho_j") {
            const auto* z = std::get_if<glab::Zonotope>(&body);
            if (!z) throw glab::Unsupported("rho_j: zonotope body required");
            return glab::projection_generating_measure(*z, j);
        }
        if (descriptor == "direction") return glab::direction_measure(body, cfg);
        if (descriptor == "proj-average")
            return glab::projection_average_measure(body, k > 0 ? k : j + 1, cfg);
        throw glab::SchemaError("unknown descriptor: " + descriptor);
    }();

    glab::write_csv_file(m, out);
    glab::ValueSE mass = glab::integrate(m, [](long) { return 1.0; });
    Json side;
    side["descriptor"] = descriptor;
    side["carrier"] = glab::to_string(m.carrier());
    side["body"] = glab::body_json(body);
    side["d"] = d;
    side["j"] = j;
    if (k > 0) side["k"] = k;
    side["samples"] = samples;
    side["seed"] = seed;
    side["rows"] = m.size();
    side["mass"] = mass.value;
    side["mass_se"] = mass.se;
    side["draws"] = m.meta().draws;
    side["degenerate_draws"] = m.meta().degenerate_draws;
    write_text(out + ".json", glab::dump_json(side));
    std::cout << descriptor << ": " << m.size() << " samples, mass " << mass.value << " +- " << mass.se
              << " -> " << out << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& identity, const std::string& body_path, const std::string& body2_path,
               const glab::ScenarioConfig& cfg, const std::string& report_path) {
    glab::Body body = load_body(body_path);
    std::optional<glab::Body> body2;
    if (!body2_path.empty()) body2 = load_body(body2_path);

    auto t0 = std::chrono::steady_clock::now();
    glab::VerifyResult res = glab::run_verify(identity, body, body2 ? &*body2 : nullptr, cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json echo = glab::body_json(body);
    if (body2) echo = Json{{"body", echo}, {"body2", glab::body_json(*body2)}};
    Json rep = glab::report_json(res, cfg, echo);
    if (!report_path.empty()) write_text(report_path, glab::dump_json(rep));

    std::cout << identity << ": fitted " << res.report.fitted << ", max |z| " << res.report.max_abs_z()
              << ", verdict " << (res.pass ? "PASS" : "FAIL") << " (" << secs << " s)\n";
    for (const auto& c : res.candidates)
        std::cout << "  candidate " << c.name << " = " << c.value << ": max |z| " << c.max_abs_z << " -> "
                  << (c.pass ? "pass" : "fail") << "\n";
    return res.pass ? kExitOk : kExitVerdict;
}

int cmd_bundle(const std::string& dir, const std::string& out) {
    namespace fs = std::filesystem;
    Json summary = Json::array();
    std::vector<std::string> warnings;
    std::vector<fs::path> files;
    if (!fs::exists(dir)) {
        warnings.push_back("directory does not exist: " + dir);
    } else {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::string csv = "identity,body,d,j,fitted,fitted_se,max_abs_resid_z,candidate_1_z,candidate_rho_z,pass\n";
    for (const auto& f : files) {
        std::ifstream is(f);
        Json doc;
        try {
            doc = Json::parse(is);
        } catch (...) {
            warnings.push_back("skipped (not JSON): " + f.string());
            continue;
        }
        if (!doc.contains("identity") || !doc.contains("fitted")) {
            warnings.push_back("skipped (not a report): " + f.string());
            continue;
        }
        Json row;
        row["identity"] = doc["identity"];
        std::string body_type;
        if (doc.contains("scenario") && doc["scenario"].contains("body")) {
            const auto& b = doc["scenario"]["body"];
            body_type = b.contains("type") ? b["type"].get<std::string>() : std::string("composite");
        }
        row["body"] = body_type;
        row["d"] = doc["scenario"].value("d", 0);
        row["j"] = doc["scenario"].value("j", 0);
        row["fitted"] = doc["fitted"].value("constant", 0.0);
        row["fitted_se"] = doc["fitted"].value("se", 0.0);
        row["max_abs_resid_z"] = doc["fitted"].value("max_abs_resid_z", 0.0);
        double z1 = 0, zr = 0;
        if (doc.contains("candidates"))
            for (const auto& c : doc["candidates"]) {
                if (c.value("name", "") == "1") z1 = c.value("max_abs_z", 0.0);
                if (c.value("name", "") == "rho(d,j)") zr = c.value("max_abs_z", 0.0);
            }
        row["candidate_1_z"] = z1;
        row["candidate_rho_z"] = zr;
        bool pass = doc.contains("verdict") && doc["verdict"].value("pass", false);
        row["pass"] = pass;
        summary.push_back(row);
        char line[512];
        std::snprintf(line, sizeof(line), "%s,%s,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                      row["identity"].get<std::string>().c_str(), body_type.c_str(), row["d"].get<int>(),
                      row["j"].get<int>(), row["fitted"].get<double>(), row["fitted_se"].get<double>(),
                      row["max_abs_resid_z"].get<double>(), z1, zr, pass ? "true" : "false");
        csv += line;
    }
    Json doc;
    doc["reports"] = summary;
    doc["warnings"] = warnings;
    write_text(out + ".json", glab::dump_json(doc));
    write_text(out + ".csv", csv);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "bundle: " << summary.size() << " reports -> " << out << ".{csv,json}\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integral-geometry descriptors of convex bodies and identity verification"};
    app.require_subcommand(1);

    std::string body_path, body2_path, out_path, report_path, dir_path;
    std::string descriptor, identity;
    glab::ScenarioConfig cfg;
    long samples = 100000;
    int d = 3, j = 1, k = -1, probes = 10, per_atom = 4, inner = 1;
    std::uint64_t seed = 12345;
    double z = 3.0;
    std::string f_choice = "one", phi_choice = "intrinsic";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--body", body_path, "body spec JSON")->required();
        sub->add_option("--d", d, "ambient dimension")->required();
        sub->add_option("--j", j, "homogeneity degree");
        sub->add_option("--k", k, "projection dimension (where applicable)");
        sub->add_option("--samples", samples, "outer Monte Carlo draws");
        sub->add_option("--seed", seed, "root seed");
        sub->add_option("--inner", inner, "inner samples per continuous component");
    };

    CLI::App* compute = app.add_subcommand("compute", "compute a descriptor, write CSV + JSON sidecar");
    compute->add_option("descriptor", descriptor, "flag|gamma|tilde-gamma|rho_j|direction|proj-average")->required();
    add_common(compute);
    compute->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* verify = app.add_subcommand("verify", "check an identity, write a report");
    verify->add_option("identity", identity, "thm-1-1|thm-3-1|thm-5-1|thm-6-1|cor-6-2|prop-4-1|prop-6-3|thm-7-1|identity-proj-span|eq-2-5|discrimination")
        ->required();
    add_common(verify);
    verify->add_option("--body2", body2_path, "second body (discrimination)");
    verify->add_option("--z", z, "z-score threshold");
    verify->add_option("--probes", probes, "probe pairs in the battery");
    verify->add_option("--per-atom", per_atom, "fibre samples per atom in Radon pushforwards");
    verify->add_option("--f", f_choice, "probe function for thm-5-1: one|bracket");
    verify->add_option("--phi", phi_choice, "valuation for thm-3-1: intrinsic|crofton");
    verify->add_option("--report", report_path, "report JSON path");

    CLI::App* bundle = app.add_subcommand("bundle", "aggregate verify reports into a summary table");
    bundle->add_option("--dir", dir_path, "directory of report JSONs")->required();
    bundle->add_option("--out", out_path, "output path prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return cmd_compute(descriptor, body_path, d, j, k, samples, inner, seed, out_path);
        if (verify->parsed()) {
            cfg.d = d;
            cfg.j = j;
            cfg.k = k;
            cfg.samples = samples;
            cfg.probes = probes;
            cfg.per_atom = per_atom;
            cfg.inner = inner;
            cfg.seed = seed;
            cfg.z = z;
            cfg.f_choice = f_choice;
            cfg.phi_choice = phi_choice;
            return cmd_verify(identity, body_path, body2_path, cfg, report_path);
        }
        if (bundle->parsed()) return cmd_bundle(dir_path, out_path);
    } catch (const glab::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const glab::Unsupported& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const glab::InvalidDimension& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
