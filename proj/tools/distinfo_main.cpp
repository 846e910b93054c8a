// Command-line front end: entropy, typical-string tables, DI reports, DI
// optimization, distillation bounds, and the hashing-protocol simulator.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "distinfo/errors.hpp"
#include "distinfo/measurement.hpp"
#include "distinfo/protocol.hpp"
#include "distinfo/report.hpp"
#include "distinfo/states.hpp"
#include "distinfo/typical.hpp"
#include "distinfo/version.hpp"

namespace {

using distinfo::json;

// Exit codes (documented in README): 0 ok, 1 internal, 2 usage/bad values,
// 3 parse errors, 4 unsupported size, 5 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitUnsupportedSize = 4;
constexpr int kExitNumerical = 5;

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw distinfo::invalid_input(std::string("malformed ") + what + " entry: '" + item +
                                          "'");
        }
    }
    if (out.empty()) throw distinfo::invalid_input(std::string("empty ") + what + " list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(text, what)) {
        if (v < 0 || v != std::floor(v))
            throw distinfo::invalid_input(std::string(what) + " entries must be nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

distinfo::Spectrum spectrum_from_flag(const std::string& text) {
    return distinfo::Spectrum::normalized(parse_double_list(text, "spectrum"), 1e-9);
}

distinfo::BellDiagonalSpectrum bell_spectrum_from_flag(const std::string& text) {
    const std::vector<double> w = parse_double_list(text, "spectrum");
    if (w.size() != 4)
        throw distinfo::invalid_input("Bell-diagonal spectrum needs exactly 4 weights");
    return distinfo::BellDiagonalSpectrum::normalized({w[0], w[1], w[2], w[3]}, 1e-9);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw distinfo::error("cannot open output file: " + path);
    out << content;
}

std::string json_artifact(const json& config, json body) {
    body["tool"] = distinfo::kVersion;
    body["config"] = config;
    return body.dump(2) + "\n";
}

std::string text_header(const json& config) {
    std::string head = std::string("tool: ") + distinfo::kVersion + "\n";
    head += "config: " + config.dump() + "\n";
    return head;
}

distinfo::EnsembleDecomposition preset_ensemble(const std::string& name) {
    using distinfo::bell_state;
    if (name == "single-state") {
        return distinfo::EnsembleDecomposition(distinfo::Spectrum({1.0}), {bell_state(0)});
    }
    if (name == "three-bell-states") {
        const double third = 1.0 / 3.0;
        return distinfo::EnsembleDecomposition(
            distinfo::Spectrum::normalized({third, third, third}),
            {bell_state(0), bell_state(1), bell_state(2)});
    }
    throw distinfo::invalid_input("unknown preset: " + name +
                                  " (expected single-state or three-bell-states)");
}

distinfo::ProductBasis preset_basis(const std::string& name) {
    using distinfo::SplitSide;
    constexpr double quarter_pi = 0.78539816339744831;
    constexpr double half_pi = 1.5707963267948966;
    if (name == "computational") return distinfo::ProductBasis::computational(2, 2);
    if (name == "xx")
        return distinfo::split_product_basis(
            SplitSide::A, {quarter_pi, 0.0, quarter_pi, 0.0, quarter_pi, 0.0});
    if (name == "yy")
        return distinfo::split_product_basis(
            SplitSide::A, {quarter_pi, half_pi, quarter_pi, half_pi, quarter_pi, half_pi});
    throw distinfo::invalid_input("unknown basis preset: " + name +
                                  " (expected computational, xx or yy)");
}

// -- subcommand payloads -------------------------------------------------------

struct CommonOpts {
    std::string spectrum;
    std::string ensemble_file;
    std::string output;
    std::string format = "text";
    std::uint64_t seed = 1;
};

int cmd_entropy(const CommonOpts& o) {
    const distinfo::Spectrum s = spectrum_from_flag(o.spectrum);
    const double bits = distinfo::shannon_entropy(s);
    json config{{"subcommand", "entropy"}, {"spectrum", s.weights()}, {"format", o.format}};
    if (o.format == "json") {
        write_output(o.output,
                     json_artifact(config, json{{"s_bits", bits},
                                                {"s_nats", distinfo::bits_to_nats(bits)}}));
    } else if (o.format == "csv") {
        distinfo::CsvDoc doc;
        distinfo::embed_config(doc, config);
        doc.set_header({"s_bits", "s_nats"});
        doc.add_row({distinfo::fmt_g17(bits), distinfo::fmt_g17(distinfo::bits_to_nats(bits))});
        write_output(o.output, doc.str());
    } else {
        write_output(o.output, text_header(config) + "S = " + distinfo::fmt_fixed6(bits) +
                                   " bits (" + distinfo::fmt_fixed6(distinfo::bits_to_nats(bits)) +
                                   " nats)\n");
    }
    return kExitOk;
}

int cmd_typical(const CommonOpts& o, const std::string& n_list, double epsilon,
                std::size_t trials) {
    const distinfo::Spectrum s = spectrum_from_flag(o.spectrum);
    const std::vector<std::size_t> grid = parse_size_list(n_list, "n");
    const double entropy = distinfo::shannon_entropy(s);

    json config{{"subcommand", "typical"}, {"spectrum", s.weights()}, {"n", grid},
                {"epsilon", epsilon},      {"trials", trials},        {"seed", o.seed},
                {"format", o.format}};

    json rows = json::array();
    for (std::size_t n : grid) {
        if (n == 0) throw distinfo::invalid_input("typical: n must be positive");
        const distinfo::TypeClass mode = distinfo::mode_type(s, n);
        const distinfo::BigCount count = distinfo::multinomial_count(mode);
        const double mode_mass = distinfo::mode_mass(s, n);
        const distinfo::MassEstimate mass = distinfo::epsilon_typical_mass(
            distinfo::TypicalEnsemble(s, n, epsilon), trials, distinfo::mix_seed(o.seed, n));
        rows.push_back(json{{"n", n},
                            {"log2_count_per_n", count.log2_value / static_cast<double>(n)},
                            {"entropy", entropy},
                            {"mode_mass", mode_mass},
                            {"epsilon_mass", mass.value},
                            {"epsilon_mass_std_error", mass.std_error}});
    }

    if (o.format == "json") {
        write_output(o.output, json_artifact(config, json{{"rows", rows}}));
    } else {
        distinfo::CsvDoc doc;
        distinfo::embed_config(doc, config);
        doc.set_header({"n", "log2_count_per_n", "entropy", "mode_mass", "epsilon_mass",
                        "epsilon_mass_std_error"});
        for (const json& r : rows)
            doc.add_row({std::to_string(r["n"].get<std::size_t>()),
                         distinfo::fmt_g17(r["log2_count_per_n"].get<double>()),
                         distinfo::fmt_g17(r["entropy"].get<double>()),
                         distinfo::fmt_g17(r["mode_mass"].get<double>()),
                         distinfo::fmt_g17(r["epsilon_mass"].get<double>()),
                         distinfo::fmt_g17(r["epsilon_mass_std_error"].get<double>())});
        write_output(o.output, doc.str());
    }
    return kExitOk;
}

distinfo::EnsembleDecomposition ensemble_from_opts(const CommonOpts& o,
                                                   const std::string& preset) {
    if (!preset.empty()) return preset_ensemble(preset);
    if (!o.ensemble_file.empty()) return distinfo::ensemble_from_file(o.ensemble_file);
    if (!o.spectrum.empty())
        return distinfo::bell_diagonal_ensemble(bell_spectrum_from_flag(o.spectrum));
    throw distinfo::invalid_input("need --spectrum, --ensemble or --preset");
}

int cmd_di(const CommonOpts& o, const std::string& preset, const std::string& basis_name,
           double tolerance) {
    const distinfo::EnsembleDecomposition e = ensemble_from_opts(o, preset);
    const distinfo::ProductBasis basis = preset_basis(basis_name);
    const distinfo::DIReport rep = distinfo::di_report(e, basis, tolerance);

    json config{{"subcommand", "di"},      {"basis", basis_name}, {"tolerance", tolerance},
                {"format", o.format}};
    if (!o.spectrum.empty()) config["spectrum"] = o.spectrum;
    if (!o.ensemble_file.empty()) config["ensemble"] = o.ensemble_file;
    if (!preset.empty()) config["preset"] = preset;

    if (o.format == "json") {
        write_output(o.output, json_artifact(config, distinfo::di_report_to_json(rep)));
    } else {
        std::ostringstream os;
        os << text_header(config);
        for (std::size_t j = 0; j < rep.outcome_probs.size(); ++j) {
            os << "outcome " << j << ": P = " << distinfo::fmt_fixed6(rep.outcome_probs[j])
               << ", P' = " << distinfo::fmt_fixed6(rep.indication_masses[j]) << ", indicates {";
            for (std::size_t k = 0; k < rep.indication_sets[j].size(); ++k)
                os << (k ? "," : "") << rep.indication_sets[j][k];
            os << "}\n";
        }
        os << "average DI = " << distinfo::fmt_fixed6(rep.average_di) << " bits\n";
        write_output(o.output, os.str());
    }
    return kExitOk;
}

int cmd_optimize_di(const CommonOpts& o, const std::string& preset, std::size_t restarts) {
    const distinfo::EnsembleDecomposition e = ensemble_from_opts(o, preset);
    const distinfo::OptimizeResult res = distinfo::optimize_di(e, restarts, o.seed);

    json config{{"subcommand", "optimize-di"}, {"restarts", restarts}, {"seed", o.seed},
                {"format", o.format}};
    if (!o.spectrum.empty()) config["spectrum"] = o.spectrum;
    if (!o.ensemble_file.empty()) config["ensemble"] = o.ensemble_file;
    if (!preset.empty()) config["preset"] = preset;

    json basis = json::array();
    for (const auto& [a, b] : res.best_basis.parts()) {
        std::vector<double> are, aim, bre, bim;
        for (const distinfo::cplx& z : a.amplitudes()) {
            are.push_back(z.real());
            aim.push_back(z.imag());
        }
        for (const distinfo::cplx& z : b.amplitudes()) {
            bre.push_back(z.real());
            bim.push_back(z.imag());
        }
        basis.push_back(json{{"a_re", are}, {"a_im", aim}, {"b_re", bre}, {"b_im", bim}});
    }
    json body{{"best_di_bits", res.best_di},
              {"restarts", res.restarts},
              {"seed", res.seed},
              {"di_class", "single-pair-product-measurement (lower bound)"},
              {"basis", basis}};
    if (o.format == "json") {
        write_output(o.output, json_artifact(config, body));
    } else {
        write_output(o.output, text_header(config) + "best DI = " +
                                   distinfo::fmt_fixed6(res.best_di) +
                                   " bits [single-pair product measurement, lower bound]\n");
    }
    return kExitOk;
}

int cmd_bounds(const CommonOpts& o, const std::string& idmax_source, double user_idmax,
               bool idmax_given, std::size_t restarts, std::size_t multicopy,
               bool cited_upper_bound) {
    if (multicopy > 0) {
        const distinfo::MulticopyReport rep =
            distinfo::make_multicopy_report(multicopy, cited_upper_bound);
        json config{{"subcommand", "bounds"},
                    {"multicopy", multicopy},
                    {"cited_upper_bound", cited_upper_bound},
                    {"format", o.format}};
        if (o.format == "json")
            write_output(o.output, json_artifact(config, distinfo::multicopy_report_to_json(rep)));
        else
            write_output(o.output, text_header(config) + distinfo::multicopy_report_to_text(rep));
        return kExitOk;
    }

    if (idmax_source.empty())
        throw distinfo::invalid_input("bounds: --idmax-source is required (or use --multicopy)");
    distinfo::IdmaxSource src;
    if (idmax_source == "product-measurement-optimizer")
        src = distinfo::IdmaxSource::ProductMeasurementOptimizer;
    else if (idmax_source == "hashing-class-1bit")
        src = distinfo::IdmaxSource::HashingClass1Bit;
    else if (idmax_source == "user-supplied")
        src = distinfo::IdmaxSource::UserSupplied;
    else
        throw distinfo::invalid_input("bounds: unknown --idmax-source '" + idmax_source + "'");
    if (src == distinfo::IdmaxSource::UserSupplied && !idmax_given)
        throw distinfo::invalid_input("bounds: --idmax VALUE required with user-supplied source");

    const distinfo::EnsembleDecomposition e = ensemble_from_opts(o, "");
    const distinfo::BoundsReport rep = distinfo::make_bounds_report(
        e, src, idmax_given ? std::optional<double>(user_idmax) : std::nullopt, restarts, o.seed);

    json config{{"subcommand", "bounds"},
                {"idmax_source", idmax_source},
                {"restarts", restarts},
                {"seed", o.seed},
                {"format", o.format}};
    if (!o.spectrum.empty()) config["spectrum"] = o.spectrum;
    if (!o.ensemble_file.empty()) config["ensemble"] = o.ensemble_file;
    if (idmax_given) config["idmax"] = user_idmax;

    if (o.format == "json")
        write_output(o.output, json_artifact(config, distinfo::bounds_report_to_json(rep)));
    else
        write_output(o.output, text_header(config) + distinfo::bounds_report_to_text(rep));
    return kExitOk;
}

int cmd_simulate(const CommonOpts& o, std::size_t n, std::size_t rounds, std::size_t trials,
                 double epsilon, bool epsilon_given, const std::string& summary_path) {
    const distinfo::BellDiagonalSpectrum spectrum = bell_spectrum_from_flag(o.spectrum);
    if (trials == 0) throw distinfo::invalid_input("simulate: --trials must be positive");
    const std::optional<double> eps =
        epsilon_given ? std::optional<double>(epsilon) : std::nullopt;
    const distinfo::HashingProtocol protocol(spectrum, n, rounds, eps);

    json config{{"subcommand", "simulate"},
                {"spectrum", spectrum.spectrum().weights()},
                {"n", n},
                {"rounds", rounds},
                {"trials", trials},
                {"epsilon", protocol.epsilon()},
                {"seed", o.seed},
                {"format", o.format}};

    std::size_t successes = 0, map_correct = 0;
    double yield_sum = 0.0, di_sum = 0.0;
    json trial_rows = json::array();
    distinfo::CsvDoc csv;
    distinfo::embed_config(csv, config);
    csv.set_header({"seed", "n", "M", "success", "kept_pairs", "yield_per_copy"});

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = distinfo::mix_seed(o.seed, t);
        const distinfo::IdentificationResult r = protocol.run_trial(trial_seed);
        successes += r.success ? 1 : 0;
        map_correct += r.map_correct ? 1 : 0;
        yield_sum += r.yield_per_copy;
        di_sum += r.accumulated_di_bits;
        csv.add_row({std::to_string(trial_seed), std::to_string(n), std::to_string(rounds),
                     r.success ? "1" : "0", std::to_string(r.kept_pairs),
                     distinfo::fmt_g17(r.yield_per_copy)});
        if (o.format == "json")
            trial_rows.push_back(json{{"seed", trial_seed},
                                      {"n", n},
                                      {"M", rounds},
                                      {"success", r.success},
                                      {"kept_pairs", r.kept_pairs},
                                      {"yield_per_copy", r.yield_per_copy},
                                      {"surviving_candidates", r.surviving_candidates},
                                      {"map_correct", r.map_correct}});
    }

    const double rate = static_cast<double>(successes) / static_cast<double>(trials);
    // Wilson 95% interval.
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(trials);
    const double denom = 1.0 + z * z / nn;
    const double center = (rate + z * z / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(rate * (1.0 - rate) / nn + z * z / (4.0 * nn * nn)) / denom;
    json summary{{"trials", trials},
                 {"successes", successes},
                 {"success_rate", rate},
                 {"success_ci95", {std::max(0.0, center - half), std::min(1.0, center + half)}},
                 {"map_correct_rate", static_cast<double>(map_correct) / nn},
                 {"mean_yield_per_copy", yield_sum / nn},
                 {"mean_accumulated_di_bits", di_sum / nn},
                 {"epsilon", protocol.epsilon()},
                 {"candidate_count", protocol.candidates().size()},
                 {"collision_estimate",
                  distinfo::collision_estimate(
                      distinfo::shannon_entropy(spectrum.spectrum()), n, rounds)}};

    if (!summary_path.empty())
        write_output(summary_path, json_artifact(config, json{{"summary", summary}}));

    if (o.format == "json") {
        write_output(o.output,
                     json_artifact(config, json{{"summary", summary}, {"trials", trial_rows}}));
    } else if (o.format == "text") {
        std::ostringstream os;
        os << text_header(config);
        os << "trials            = " << trials << "\n";
        os << "success rate      = " << distinfo::fmt_fixed6(rate) << "\n";
        os << "mean yield/copy   = " << distinfo::fmt_fixed6(yield_sum / nn) << " ebits\n";
        os << "candidates        = " << protocol.candidates().size() << "\n";
        write_output(o.output, os.str());
    } else {
        write_output(o.output, csv.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(distinfo::kVersion) +
                 " - local distinguishability and entanglement distillation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", distinfo::kVersion);

    CommonOpts opts;
    std::string n_list = "10,100,1000";
    std::size_t n = 8, rounds = 8, trials = 1000, restarts = 64, multicopy = 0;
    double epsilon = 0.05, tolerance = 1e-9, user_idmax = 0.0;
    std::string preset, basis_name = "computational", idmax_source, summary_path;
    bool cited_upper_bound = false;

    auto add_common = [&](CLI::App* cmd, bool with_spectrum = true) {
        if (with_spectrum)
            cmd->add_option("--spectrum", opts.spectrum, "comma-separated weights");
        cmd->add_option("--output", opts.output, "output path (default stdout)");
        cmd->add_option("--format", opts.format, "output format")
            ->check(CLI::IsMember({"csv", "json", "text"}));
        cmd->add_option("--seed", opts.seed, "random seed (embedded in artifacts)");
        return cmd;
    };

    CLI::App* c_entropy = add_common(app.add_subcommand("entropy", "spectrum entropy in bits"));

    CLI::App* c_typical =
        add_common(app.add_subcommand("typical", "likely-string convergence table"));
    c_typical->add_option("--n", n_list, "comma-separated copy counts");
    c_typical->add_option("--epsilon", epsilon, "frequency window half-width");
    c_typical->add_option("--trials", trials, "Monte Carlo samples for the mass column");

    CLI::App* c_di = add_common(app.add_subcommand("di", "DI report for a fixed product basis"));
    c_di->add_option("--ensemble", opts.ensemble_file, "ensemble JSON file");
    c_di->add_option("--preset", preset, "named ensemble (single-state, three-bell-states)");
    c_di->add_option("--basis", basis_name, "basis preset (computational, xx, yy)");
    c_di->add_option("--tolerance", tolerance, "indication membership threshold");

    CLI::App* c_opt =
        add_common(app.add_subcommand("optimize-di", "search product bases for maximal DI"));
    c_opt->add_option("--ensemble", opts.ensemble_file, "ensemble JSON file");
    c_opt->add_option("--preset", preset, "named ensemble (single-state, three-bell-states)");
    c_opt->add_option("--restarts", restarts, "direct-search restarts");

    CLI::App* c_bounds =
        add_common(app.add_subcommand("bounds", "yield bounds and the DI condition"));
    c_bounds->add_option("--ensemble", opts.ensemble_file, "ensemble JSON file");
    c_bounds->add_option("--idmax-source", idmax_source,
                         "product-measurement-optimizer | hashing-class-1bit | user-supplied");
    c_bounds->add_option("--idmax", user_idmax, "I_dmax in bits (user-supplied source)");
    c_bounds->add_option("--restarts", restarts, "optimizer restarts");
    c_bounds->add_option("--multicopy", multicopy,
                         "report the n-copy four-Bell-state special case instead");
    c_bounds->add_flag("--cited-upper-bound", cited_upper_bound,
                       "also print the cited matching upper bound (multicopy mode)");

    CLI::App* c_sim =
        add_common(app.add_subcommand("simulate", "hashing-style identification trials"));
    c_sim->add_option("--n", n, "pairs per trial (exhaustive posterior caps at 12)");
    c_sim->add_option("--rounds", rounds, "parity rounds M (one measured pair each)");
    c_sim->add_option("--trials", trials, "number of independent trials");
    CLI::Option* eps_opt = c_sim->add_option(
        "--epsilon", epsilon, "frequency window (default: nearest-integer type window)");
    c_sim->add_option("--summary", summary_path, "also write the aggregate JSON summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_entropy->parsed()) return cmd_entropy(opts);
        if (c_typical->parsed()) return cmd_typical(opts, n_list, epsilon, trials);
        if (c_di->parsed()) return cmd_di(opts, preset, basis_name, tolerance);
        if (c_opt->parsed()) return cmd_optimize_di(opts, preset, restarts);
        if (c_bounds->parsed())
            return cmd_bounds(opts, idmax_source, user_idmax,
                              c_bounds->count("--idmax") > 0, restarts, multicopy,
                              cited_upper_bound);
        if (c_sim->parsed())
            return cmd_simulate(opts, n, rounds, trials, epsilon, eps_opt->count() > 0,
                                summary_path);
    } catch (const distinfo::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const distinfo::unsupported_size& e) {
        std::cerr << "unsupported size: " << e.what() << "\n";
        return kExitUnsupportedSize;
    } catch (const distinfo::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const distinfo::sampling_error& e) {
        std::cerr << "sampling error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const distinfo::invalid_input& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
