#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "distinfo/errors.hpp"
#include "distinfo/measurement.hpp"
#include "distinfo/protocol.hpp"
#include "distinfo/states.hpp"
#include "distinfo/version.hpp"

namespace distinfo {

using json = nlohmann::json;

// Full-precision rendering for machine artifacts; C locale, '.' separator.
inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Human tables use 6 decimals.
inline std::string fmt_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// -- ensemble JSON schema ----------------------------------------------------
// { "dims": [dA, dB], "states": [ { "weight": w, "re": [...], "im": [...] } ] }

inline json ensemble_to_json(const EnsembleDecomposition& e) {
    json out;
    out["dims"] = e.dims();
    json states = json::array();
    for (std::size_t i = 0; i < e.size(); ++i) {
        json s;
        s["weight"] = e.spectrum()[i];
        std::vector<double> re, im;
        for (const cplx& a : e.states()[i].amplitudes()) {
            re.push_back(a.real());
            im.push_back(a.imag());
        }
        s["re"] = re;
        s["im"] = im;
        states.push_back(std::move(s));
    }
    out["states"] = std::move(states);
    return out;
}

inline EnsembleDecomposition ensemble_from_json(const json& doc) {
    try {
        if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].size() != 2)
            throw parse_error("ensemble JSON: field 'dims' must be a 2-element array");
        const Dims dims{doc["dims"][0].get<std::size_t>(), doc["dims"][1].get<std::size_t>()};
        const std::size_t dim = dims[0] * dims[1];
        if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty())
            throw parse_error("ensemble JSON: field 'states' must be a nonempty array");

        std::vector<double> weights;
        std::vector<PureState> states;
        std::size_t idx = 0;
        for (const json& s : doc["states"]) {
            for (const char* key : {"weight", "re", "im"})
                if (!s.contains(key))
                    throw parse_error("ensemble JSON: states[" + std::to_string(idx) +
                                      "] missing field '" + key + "'");
            weights.push_back(s["weight"].get<double>());
            const auto re = s["re"].get<std::vector<double>>();
            const auto im = s["im"].get<std::vector<double>>();
            if (re.size() != dim || im.size() != dim)
                throw parse_error("ensemble JSON: states[" + std::to_string(idx) +
                                  "] amplitude length does not match dims");
            std::vector<cplx> amps(dim);
            double n2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                amps[k] = cplx{re[k], im[k]};
                n2 += std::norm(amps[k]);
            }
            if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
                throw parse_error("ensemble JSON: states[" + std::to_string(idx) +
                                  "] is not unit-norm within 1e-9");
            states.push_back(PureState::normalized(std::move(amps), dims));
            ++idx;
        }
        return EnsembleDecomposition(Spectrum::normalized(std::move(weights), 1e-9),
                                     std::move(states));
    } catch (const parse_error&) {
        throw;
    } catch (const json::exception& ex) {
        throw parse_error(std::string("ensemble JSON: ") + ex.what());
    } catch (const error& ex) {
        throw parse_error(std::string("ensemble JSON: ") + ex.what());
    }
}

inline EnsembleDecomposition ensemble_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open ensemble file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& ex) {
        throw parse_error("ensemble file " + path + ": " + ex.what());
    }
    return ensemble_from_json(doc);
}

inline json di_report_to_json(const DIReport& rep) {
    json out;
    out["outcome_probs"] = rep.outcome_probs;
    out["indication_sets"] = rep.indication_sets;
    out["indication_masses"] = rep.indication_masses;
    out["average_di_bits"] = rep.average_di;
    return out;
}

// -- bounds report -------------------------------------------------------------

enum class IdmaxSource { ProductMeasurementOptimizer, HashingClass1Bit, UserSupplied };

inline const char* idmax_source_name(IdmaxSource s) {
    switch (s) {
        case IdmaxSource::ProductMeasurementOptimizer: return "product-measurement-optimizer";
        case IdmaxSource::HashingClass1Bit: return "hashing-class-1bit";
        case IdmaxSource::UserSupplied: return "user-supplied";
    }
    return "?";
}

// The measurement class a DI number belongs to matters: single-pair product
// measurements and cross-pair hashing rounds are different classes, so every
// report labels its values.
struct BoundsReport {
    double s_bits = 0.0;
    double e_sigma = 0.0;
    double id_bits = 0.0;
    std::string id_label;
    double idmax_bits = 0.0;
    std::string idmax_class_label;
    std::optional<double> e12;  // absent when the achieved DI is zero
    double e13 = 0.0;
    double measured_fraction_min = 0.0;
    bool condition_eq14 = false;
    double condition_margin = 0.0;
};

inline BoundsReport make_bounds_report(const EnsembleDecomposition& e, IdmaxSource source,
                                       std::optional<double> user_idmax, std::size_t restarts,
                                       std::uint64_t seed) {
    BoundsReport rep;
    rep.s_bits = shannon_entropy(e.spectrum());
    rep.e_sigma = ensemble_entanglement(e);

    switch (source) {
        case IdmaxSource::HashingClass1Bit:
            // One parity bit per sacrificed pair; Bell-diagonal sources only.
            if (e.size() != 4 || e.dims() != Dims{2, 2})
                throw invalid_input("hashing-class-1bit applies to Bell-diagonal spectra only");
            rep.id_bits = 1.0;
            rep.id_label = "hashing-class-1bit";
            rep.idmax_bits = 1.0;
            rep.idmax_class_label = "hashing-class-1bit";
            break;
        case IdmaxSource::ProductMeasurementOptimizer: {
            rep.id_bits =
                di_report(e, ProductBasis::computational(e.dims()[0], e.dims()[1])).average_di;
            rep.id_label = "computational-basis";
            OptimizeResult opt = optimize_di(e, restarts, seed);
            rep.idmax_bits = opt.best_di;
            rep.idmax_class_label = "single-pair-product-measurement (optimizer lower bound)";
            break;
        }
        case IdmaxSource::UserSupplied:
            if (!user_idmax) throw contract_error("user-supplied idmax source needs a value");
            rep.id_bits =
                di_report(e, ProductBasis::computational(e.dims()[0], e.dims()[1])).average_di;
            rep.id_label = "computational-basis";
            rep.idmax_bits = *user_idmax;
            rep.idmax_class_label = "user-supplied";
            break;
    }

    if (!(rep.idmax_bits > 0.0))
        throw contract_error("bounds report: idmax must be positive");
    if (rep.id_bits > 0.0) {
        const YieldBounds yb =
            yield_bounds(e.spectrum(), rep.e_sigma, rep.s_bits, rep.id_bits, rep.idmax_bits);
        rep.e12 = yb.e12;
        rep.e13 = yb.e13;
        rep.measured_fraction_min = yb.measured_fraction_min;
    } else {
        rep.e13 = (1.0 - rep.s_bits / rep.idmax_bits) * rep.e_sigma;
        rep.measured_fraction_min = rep.s_bits / rep.idmax_bits;
    }
    const ConditionResult cond = distinguishability_condition(rep.s_bits, rep.idmax_bits);
    rep.condition_eq14 = cond.satisfied;
    rep.condition_margin = cond.margin;
    return rep;
}

inline json bounds_report_to_json(const BoundsReport& r) {
    json out;
    out["s_bits"] = r.s_bits;
    out["e_sigma"] = r.e_sigma;
    out["id_bits"] = r.id_bits;
    out["id_label"] = r.id_label;
    out["idmax_bits"] = r.idmax_bits;
    out["idmax_class_label"] = r.idmax_class_label;
    if (r.e12)
        out["e12"] = *r.e12;
    else
        out["e12"] = nullptr;
    out["e13"] = r.e13;
    out["measured_fraction_min"] = r.measured_fraction_min;
    out["condition"] = {{"satisfied", r.condition_eq14}, {"margin_bits", r.condition_margin}};
    return out;
}

inline std::string bounds_report_to_text(const BoundsReport& r) {
    std::ostringstream os;
    os << "source entropy  S        = " << fmt_fixed6(r.s_bits) << " bits ("
       << fmt_fixed6(bits_to_nats(r.s_bits)) << " nats)\n";
    os << "ensemble entanglement E  = " << fmt_fixed6(r.e_sigma) << " ebits\n";
    os << "achieved DI  I_d         = " << fmt_fixed6(r.id_bits) << " bits [" << r.id_label
       << "]\n";
    os << "maximal DI   I_dmax      = " << fmt_fixed6(r.idmax_bits) << " bits ["
       << r.idmax_class_label << "]\n";
    if (r.e12)
        os << "yield (achieved DI)      = " << fmt_fixed6(*r.e12) << " ebits/copy\n";
    else
        os << "yield (achieved DI)      = n/a (achieved DI is zero)\n";
    os << "yield (maximal DI)       = " << fmt_fixed6(r.e13) << " ebits/copy\n";
    os << "measured fraction >=     = " << fmt_fixed6(r.measured_fraction_min) << "\n";
    os << "condition I_dmax >= S    : " << (r.condition_eq14 ? "true" : "false")
       << " (margin " << fmt_fixed6(r.condition_margin) << " bits)\n";
    return os.str();
}

// n independent copies of the uniform four-Bell-state mixture: S = 2 bits,
// E = n ebits, at least one DI bit per copy, hence a distillable lower bound
// of n - 2. The matching upper bound (relative entropy of entanglement) is a
// cited external value, never computed here.
struct MulticopyReport {
    std::size_t copies = 0;
    double s_bits = 2.0;
    double e_sigma = 0.0;
    double idmax_lower_bits = 0.0;
    double lower_bound = 0.0;
    bool cite_upper_bound = false;
};

inline MulticopyReport make_multicopy_report(std::size_t copies, bool cite_upper_bound) {
    if (copies < 1) throw contract_error("multicopy report: need at least one copy");
    MulticopyReport r;
    r.copies = copies;
    r.e_sigma = static_cast<double>(copies);
    r.idmax_lower_bits = static_cast<double>(copies);
    r.lower_bound = static_cast<double>(copies) - 2.0;
    r.cite_upper_bound = cite_upper_bound;
    return r;
}

inline json multicopy_report_to_json(const MulticopyReport& r) {
    json out;
    out["copies"] = r.copies;
    out["s_bits"] = r.s_bits;
    out["e_sigma"] = r.e_sigma;
    out["idmax_lower_bits"] = r.idmax_lower_bits;
    out["distillable_lower_bound"] = r.lower_bound;
    if (r.cite_upper_bound) {
        out["distillable_upper_bound"] = r.lower_bound;
        out["upper_bound_source"] =
            "cited: relative entropy of entanglement equals the lower bound (not computed here)";
    }
    return out;
}

inline std::string multicopy_report_to_text(const MulticopyReport& r) {
    std::ostringstream os;
    os << "copies n                 = " << r.copies << "\n";
    os << "source entropy  S        = " << fmt_fixed6(r.s_bits) << " bits\n";
    os << "ensemble entanglement E  = " << fmt_fixed6(r.e_sigma) << " ebits\n";
    os << "maximal DI   I_dmax     >= " << fmt_fixed6(r.idmax_lower_bits) << " bits\n";
    os << "distillable lower bound  = " << fmt_fixed6(r.lower_bound) << " ebits/copy-set\n";
    if (r.cite_upper_bound)
        os << "upper bound (cited)      = " << fmt_fixed6(r.lower_bound)
           << " ebits/copy-set (relative entropy of entanglement; equality follows)\n";
    return os.str();
}

// -- CSV ------------------------------------------------------------------------
// UTF-8, '#' config lines, one header row, '.' decimals, LF endings.

class CsvDoc {
  public:
    void add_config(const std::string& key, const std::string& value) {
        config_ += "# " + key + ": " + value + "\n";
    }
    void set_header(const std::vector<std::string>& cols) { header_ = join(cols); }
    void add_row(const std::vector<std::string>& fields) { rows_ += join(fields) + "\n"; }

    std::string str() const { return config_ + header_ + "\n" + rows_; }

  private:
    static std::string join(const std::vector<std::string>& fields) {
        std::string line;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) line += ',';
            line += fields[i];
        }
        return line;
    }

    std::string config_, header_, rows_;
};

// Embeds the run configuration (seed included) in every machine artifact so
// reruns are reproducible and self-describing.
inline void embed_config(CsvDoc& doc, const json& config) {
    doc.add_config("tool", kVersion);
    for (auto it = config.begin(); it != config.end(); ++it)
        doc.add_config(it.key(), it.value().is_string() ? it.value().get<std::string>()
                                                        : it.value().dump());
}

}  // namespace distinfo
