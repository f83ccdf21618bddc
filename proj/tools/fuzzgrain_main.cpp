#include "fuzzgrain/channels.hpp"
#include "fuzzgrain/spectral.hpp"
#include "fuzzgrain/symmetry.hpp"
#include "fuzzgrain/xxchain.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fuzzgrain;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumerical = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Ordered config map embedded in every output file.
using Config = std::vector<std::pair<std::string, std::string>>;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

std::string csv_header(const Config& config, const std::string& schema) {
    std::ostringstream os;
    for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
    os << schema << "\n";
    return os.str();
}

json config_json(const Config& config) {
    json j = json::object();
    for (const auto& [k, v] : config) j[k] = v;
    return j;
}

GammaSignature parse_gamma(const std::string& text, int d) {
    // row-major matrix syntax "g00,g01;g10,g11"
    std::vector<int> counts;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::stringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) counts.push_back(std::stoi(cell));
    }
    return GammaSignature(d, std::move(counts));
}

std::string gamma_string(const GammaSignature& gamma) {
    std::ostringstream os;
    for (int l = 0; l < gamma.d(); ++l) {
        if (l) os << ';';
        for (int lp = 0; lp < gamma.d(); ++lp) {
            if (lp) os << ',';
            os << gamma.at(l, lp);
        }
    }
    return os.str();
}

json gamma_json(const GammaSignature& gamma) {
    json rows = json::array();
    for (int l = 0; l < gamma.d(); ++l) {
        json row = json::array();
        for (int lp = 0; lp < gamma.d(); ++lp) row.push_back(gamma.at(l, lp));
        rows.push_back(row);
    }
    return rows;
}

struct CommonArgs {
    int n = 2;
    int d = 2;
    double p = 0.5;
    std::string model = "general";
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string format = "csv";
};

int cmd_blocks(int n, int d, const std::string& out, const std::string& format) {
    const SystemShape shape{n, d};
    const auto sectors = enumerate_sectors(shape);
    Config config{{"command", "blocks"}, {"n", std::to_string(n)}, {"d", std::to_string(d)},
                  {"sector_count", std::to_string(sectors.size())}};

    if (format == "json") {
        json j;
        j["config"] = config_json(config);
        j["sectors"] = json::array();
        for (const auto& gamma : sectors) {
            json s;
            s["gamma"] = gamma_json(gamma);
            s["size"] = sector_size(gamma);
            s["canonical"] = gamma_json(canonical_gamma(gamma));
            if (d == 2) {
                const auto label = qubit_label(gamma);
                s["alpha"] = label.alpha;
                s["beta"] = label.beta;
                s["gamma11"] = label.gamma11;
                s["degeneracy"] = label.degeneracy;
            }
            j["sectors"].push_back(std::move(s));
        }
        write_text(out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << csv_header(config, "gamma,size,canonical,alpha,beta,gamma11,degeneracy");
        for (const auto& gamma : sectors) {
            os << '"' << gamma_string(gamma) << "\"," << sector_size(gamma) << ",\""
               << gamma_string(canonical_gamma(gamma)) << '"';
            if (d == 2) {
                const auto label = qubit_label(gamma);
                os << ',' << label.alpha << ',' << label.beta << ',' << label.gamma11 << ','
                   << label.degeneracy;
            } else {
                os << ",,,,";
            }
            os << "\n";
        }
        write_text(out, os.str());
    }
    return kExitOk;
}

int cmd_spectrum(const CommonArgs& args, const std::optional<std::string>& gamma_arg,
                 bool dense_check) {
    const SystemShape shape{args.n, args.d};
    const auto ch = fuzzy_random(shape, args.p, parse_model(args.model), args.seed);
    Config config{{"command", "spectrum"},  {"model", args.model},
                  {"n", std::to_string(args.n)}, {"d", std::to_string(args.d)},
                  {"p", fmt(args.p)},        {"seed", std::to_string(args.seed)}};
    if (gamma_arg) config.emplace_back("gamma", *gamma_arg);

    std::vector<std::pair<GammaSignature, std::vector<Complex>>> blocks;
    json summary = json::object();
    if (gamma_arg) {
        const auto gamma = parse_gamma(*gamma_arg, args.d);
        blocks.emplace_back(gamma, block_eigenvalues(block(ch, gamma)));
    } else {
        auto report = full_spectrum(ch);
        summary["unit_count"] = report.unit_count;
        summary["spectral_gap"] = report.spectral_gap;
        summary["log_volume_ratio"] = report.log_volume_ratio;
        blocks = std::move(report.per_block);
    }
    if (dense_check) {
        // dense-superoperator cross-check; subject to the memory budget
        const Matrix super = superoperator(ch);
        Eigen::ComplexEigenSolver<Matrix> solver(super, /*computeEigenvectors=*/false);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("dense eigensolver failed");
        int dense_units = 0;
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
            if (std::abs(solver.eigenvalues()(i) - 1.0) < kUnitEigTol) ++dense_units;
        summary["dense_unit_count"] = dense_units;
    }

    if (args.format == "json") {
        json j;
        j["config"] = config_json(config);
        if (!summary.empty()) j["summary"] = summary;
        j["blocks"] = json::array();
        for (const auto& [gamma, eigs] : blocks) {
            json b;
            b["gamma"] = gamma_json(gamma);
            b["size"] = eigs.size();
            b["eigenvalues"] = json::array();
            for (const auto& lam : eigs)
                b["eigenvalues"].push_back({lam.real(), lam.imag()});
            j["blocks"].push_back(std::move(b));
        }
        write_text(args.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        for (const auto& [k, v] : summary.items())
            config.emplace_back(k, v.dump());
        os << csv_header(config, "block_gamma,re,im");
        for (const auto& [gamma, eigs] : blocks)
            for (const auto& lam : eigs)
                os << '"' << gamma_string(gamma) << "\"," << fmt(lam.real()) << ','
                   << fmt(lam.imag()) << "\n";
        write_text(args.out, os.str());
    }
    return kExitOk;
}

int cmd_volume(const CommonArgs& args, int n_min, int n_max) {
    const auto rows =
        volume_scan(parse_model(args.model), args.d, args.p, n_min, n_max, args.seed);
    Config config{{"command", "volume"},        {"model", args.model},
                  {"d", std::to_string(args.d)}, {"p", fmt(args.p)},
                  {"n_min", std::to_string(n_min)}, {"n_max", std::to_string(n_max)},
                  {"seed", std::to_string(args.seed)}};
    if (args.format == "json") {
        json j;
        j["config"] = config_json(config);
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"n", r.n},
                                 {"log_ratio_measured", r.log_ratio_measured},
                                 {"log_ratio_ansatz", r.log_ratio_ansatz},
                                 {"log_ratio_empirical", r.log_ratio_empirical}});
        write_text(args.out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << csv_header(config, "n,log_ratio_measured,log_ratio_ansatz,log_ratio_empirical");
        for (const auto& r : rows)
            os << r.n << ',' << fmt(r.log_ratio_measured) << ',' << fmt(r.log_ratio_ansatz)
               << ',' << fmt(r.log_ratio_empirical) << "\n";
        write_text(args.out, os.str());
    }
    return kExitOk;
}

std::string matrix_file_name(const std::string& base, double t, const std::string& scheme) {
    std::ostringstream os;
    os << base << ".t" << t << "." << scheme << ".matrix.csv";
    return os.str();
}

int cmd_entwave(const std::vector<double>& t_list, const std::string& scheme_name_arg, double p,
                int window, const std::string& out, const std::string& format) {
    const auto scheme = xxchain::parse_scheme(scheme_name_arg);
    Config config{{"command", "entwave"}, {"scheme", scheme_name_arg}, {"p", fmt(p)},
                  {"window", std::to_string(window)}};

    std::vector<xxchain::ConcurrenceField> fields;
    for (double t : t_list) fields.push_back(xxchain::concurrence_map(t, scheme, p, window));

    // companion matrix layout, one file per (t, scheme)
    if (!out.empty() && out != "-") {
        for (const auto& field : fields) {
            const int lo = field.entries.front().i;
            const int hi = field.entries.back().j;
            std::ostringstream os;
            Config mc = config;
            mc.emplace_back("t", fmt(field.time));
            std::ostringstream schema;
            schema << "i\\j";
            for (int j = lo; j <= hi; ++j) schema << ',' << j;
            os << csv_header(mc, schema.str());
            for (int i = lo; i <= hi; ++i) {
                os << i;
                for (int j = lo; j <= hi; ++j) {
                    os << ',';
                    if (i != j) os << fmt(field.value_at(i, j));
                    else os << 0;
                }
                os << "\n";
            }
            write_text(matrix_file_name(out, field.time, scheme_name_arg), os.str());
        }
    }

    if (format == "json") {
        json j;
        j["config"] = config_json(config);
        j["maps"] = json::array();
        for (const auto& field : fields) {
            json m;
            m["t"] = field.time;
            m["group_indexed"] = field.group_indexed;
            m["entries"] = json::array();
            for (const auto& e : field.entries)
                m["entries"].push_back({{"i", e.i}, {"j", e.j}, {"concurrence", e.value}});
            j["maps"].push_back(std::move(m));
        }
        write_text(out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << csv_header(config, "t,scheme,i,j,concurrence,p,window");
        for (const auto& field : fields)
            for (const auto& e : field.entries)
                os << fmt(field.time) << ',' << scheme_name_arg << ',' << e.i << ',' << e.j
                   << ',' << fmt(e.value) << ',' << fmt(p) << ',' << window << "\n";
        write_text(out, os.str());
    }
    return kExitOk;
}

int cmd_ensemble(const CommonArgs& args, const std::string& gamma_arg, int realizations,
                 int bins) {
    const SystemShape shape{args.n, args.d};
    const auto gamma = parse_gamma(gamma_arg, args.d);
    const auto model = parse_model(args.model);
    const auto ens =
        ensemble_spectrum(model, shape, args.p, gamma, realizations, args.seed);

    Config config{{"command", "ensemble"},      {"model", args.model},
                  {"n", std::to_string(args.n)}, {"d", std::to_string(args.d)},
                  {"p", fmt(args.p)},            {"gamma", gamma_arg},
                  {"realizations", std::to_string(realizations)},
                  {"seed", std::to_string(args.seed)}, {"bins", std::to_string(bins)}};

    // histogram over real parts
    double lo = 1e300, hi = -1e300;
    for (const auto& lam : ens.samples) {
        lo = std::min(lo, lam.real());
        hi = std::max(hi, lam.real());
    }
    if (ens.samples.empty()) { lo = 0.0; hi = 1.0; }
    if (hi - lo < 1e-12) hi = lo + 1e-12;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (const auto& lam : ens.samples) {
        auto b = static_cast<std::size_t>((lam.real() - lo) / (hi - lo) * bins);
        if (b >= counts.size()) b = counts.size() - 1;
        ++counts[b];
    }
    const double width = (hi - lo) / bins;
    const double total = static_cast<double>(ens.samples.size());

    // 10-group split of the realizations for a spread estimate of the mean
    std::vector<double> group_means;
    if (model != FuzzyModel::General && realizations >= 10) {
        const int per = realizations / 10;
        for (int g = 0; g < 10; ++g) {
            const auto part = ensemble_spectrum(model, shape, args.p, gamma, per,
                                                split_seed(args.seed, 1000 + g));
            group_means.push_back(part.mean.real());
        }
    }
    double group_split_std = 0.0;
    if (!group_means.empty()) {
        double m = 0.0;
        for (double v : group_means) m += v;
        m /= static_cast<double>(group_means.size());
        for (double v : group_means) group_split_std += (v - m) * (v - m);
        group_split_std = std::sqrt(group_split_std / static_cast<double>(group_means.size()));
    }

    if (args.format == "json") {
        json j;
        j["config"] = config_json(config);
        j["summary"] = {{"samples", ens.samples.size()},
                        {"mean_re", ens.mean.real()},
                        {"mean_im", ens.mean.imag()},
                        {"std", ens.stddev},
                        {"group_split_std", group_split_std}};
        j["histogram"] = json::array();
        for (int b = 0; b < bins; ++b)
            j["histogram"].push_back({{"bin_left", lo + b * width},
                                      {"bin_right", lo + (b + 1) * width},
                                      {"density", counts[b] / (total * width)}});
        write_text(args.out, j.dump(2) + "\n");
    } else {
        Config c = config;
        c.emplace_back("samples", std::to_string(ens.samples.size()));
        c.emplace_back("mean_re", fmt(ens.mean.real()));
        c.emplace_back("mean_im", fmt(ens.mean.imag()));
        c.emplace_back("std", fmt(ens.stddev));
        c.emplace_back("group_split_std", fmt(group_split_std));
        std::ostringstream os;
        os << csv_header(c, "bin_left,bin_right,density");
        for (int b = 0; b < bins; ++b)
            os << fmt(lo + b * width) << ',' << fmt(lo + (b + 1) * width) << ','
               << fmt(counts[b] / (total * width)) << "\n";
        write_text(args.out, os.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzgrain: fuzzy-measurement and coarse-graining channel analysis"};
    app.require_subcommand(1);

    CommonArgs args;
    std::optional<std::string> gamma_arg;
    int n_min = 1, n_max = 4;
    std::vector<double> t_list = {2.0, 4.0, 6.0};
    std::string scheme = "exact";
    int window = 12;
    int realizations = 100;
    int bins = 50;
    double entwave_p = 0.8;

    auto add_common = [&](CLI::App* cmd, bool with_model = true) {
        cmd->add_option("--n", args.n, "particle count");
        cmd->add_option("--d", args.d, "local dimension");
        cmd->add_option("--p", args.p, "identity weight");
        if (with_model) cmd->add_option("--model", args.model, "general|two-body|chain");
        cmd->add_option("--seed", args.seed, "root seed");
        cmd->add_option("--out", args.out, "output path, - for stdout");
        cmd->add_option("--format", args.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* blocks = app.add_subcommand("blocks", "list gamma sectors");
    add_common(blocks, false);

    auto* spectrum = app.add_subcommand("spectrum", "block-wise channel spectrum");
    add_common(spectrum);
    spectrum->add_option("--gamma", gamma_arg, "restrict to one sector, e.g. \"1,0;0,1\"");
    bool dense_check = false;
    spectrum->add_flag("--dense", dense_check, "cross-check against the dense superoperator");

    auto* volume = app.add_subcommand("volume", "volume contraction scan over n");
    add_common(volume);
    volume->add_option("--n-min", n_min, "first n");
    volume->add_option("--n-max", n_max, "last n");

    auto* entwave = app.add_subcommand("entwave", "XX-chain concurrence maps");
    entwave->add_option("--t", t_list, "time list")->delimiter(',');
    entwave->add_option("--scheme", scheme, "exact|fuzzy|cg2|cg4");
    entwave->add_option("--p", entwave_p, "fuzzy detection probability");
    entwave->add_option("--window", window, "site half-width of the map");
    entwave->add_option("--out", args.out, "output path, - for stdout");
    entwave->add_option("--format", args.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* ensemble = app.add_subcommand("ensemble", "spectral ensemble of one sector");
    add_common(ensemble);
    std::string ensemble_gamma = "5,0;0,1";
    ensemble->add_option("--gamma", ensemble_gamma, "sector, e.g. \"5,0;0,1\"");
    ensemble->add_option("--realizations", realizations, "realization count");
    ensemble->add_option("--bins", bins, "histogram bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (blocks->parsed()) return cmd_blocks(args.n, args.d, args.out, args.format);
        if (spectrum->parsed()) return cmd_spectrum(args, gamma_arg, dense_check);
        if (volume->parsed()) return cmd_volume(args, n_min, n_max);
        if (entwave->parsed())
            return cmd_entwave(t_list, scheme, entwave_p, window, args.out, args.format);
        if (ensemble->parsed()) return cmd_ensemble(args, ensemble_gamma, realizations, bins);
    } catch (const BudgetError& e) {
        std::cerr << "feasibility error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitBadArgs;
}
