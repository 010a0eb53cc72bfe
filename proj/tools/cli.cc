#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gcoh/channel.h"
#include "gcoh/coherence.h"
#include "gcoh/equivalence.h"
#include "gcoh/error.h"
#include "gcoh/json_io.h"
#include "gcoh/state_zoo.h"
#include "gcoh/testing/oracle.h"

namespace gcoh::cli {

namespace {

using nlohmann::json;

constexpr const char *kTolEnv = "GAUSS_COHERENCE_TOL";

struct Outcome {
    json doc;
    int code = kOk;
};

struct Config {
    std::optional<double> tol_flag;
    std::optional<double> tol_env;
    std::uint64_t seed = 0;
    bool pretty = false;
    std::string output;

    double tol(double fallback) const {
        if (tol_flag) {
            return *tol_flag;
        }
        return tol_env.value_or(fallback);
    }
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GaussianState load_state(const std::string &path, double tol) {
    return state_from_json(parse_json(read_file(path)), tol);
}

GaussianChannel load_channel(const std::string &path, double tol) {
    return channel_from_json(parse_json(read_file(path)), tol);
}

std::optional<double> parse_env_tol() {
    const char *raw = std::getenv(kTolEnv);
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    char *end = nullptr;
    double value = std::strtod(raw, &end);
    if (*end != '\0' || !(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::usage_error, std::string(kTolEnv) + " must be a positive number");
    }
    return value;
}

json error_doc(std::string_view kind, const std::string &detail) {
    return {{"error", {{"kind", std::string(kind)}, {"detail", detail}}}};
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::numeric_error:
        case ErrorKind::invariant_violation:
            return kNumericError;
        default:
            return kInputError;
    }
}

int verdict_code(const EquivalenceVerdict &verdict) {
    return std::holds_alternative<NotEquivalent>(verdict) || std::holds_alternative<HypothesisViolated>(verdict)
               ? kNegative
               : kOk;
}

bool decisive(const EquivalenceVerdict &verdict) {
    return std::holds_alternative<Equivalent>(verdict) || std::holds_alternative<NotEquivalent>(verdict);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Config cfg;
    std::function<Outcome()> action;

    CLI::App app{"Gaussian coherence toolkit", "gcoh"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol", cfg.tol_flag, "Tolerance (overrides GAUSS_COHERENCE_TOL)")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Seed for generators");
    app.add_flag("--pretty", cfg.pretty, "Indent output");
    app.add_option("-o,--output", cfg.output, "Write the result here instead of stdout");

    std::string path_a;
    std::string path_b;

    auto *validate = app.add_subcommand("validate", "Validate a state document and echo it");
    validate->add_option("state", path_a)->required();
    validate->callback([&] {
        action = [&] { return Outcome{state_to_json(load_state(path_a, cfg.tol(kDefaultTol)))}; };
    });

    auto *coherence = app.add_subcommand("coherence", "Relative entropy of coherence");
    coherence->add_option("state", path_a)->required();
    coherence->callback([&] {
        action = [&] {
            double tol = cfg.tol(kDefaultTol);
            return Outcome{coherence_to_json(relative_entropy_coherence(load_state(path_a, tol), tol))};
        };
    });

    auto *spectrum = app.add_subcommand("spectrum", "Symplectic eigenvalues");
    spectrum->add_option("state", path_a)->required();
    spectrum->callback([&] {
        action = [&] {
            double tol = cfg.tol(kDefaultTol);
            GaussianState state = load_state(path_a, tol);
            return Outcome{json{{"symplectic_eigenvalues", williamson_spectrum(state).values},
                                {"det", state.cov().determinant()},
                                {"pure", is_pure(state, tol)}}};
        };
    });

    auto *apply = app.add_subcommand("apply", "Apply a channel to a state");
    apply->add_option("channel", path_a)->required();
    apply->add_option("state", path_b)->required();
    apply->callback([&] {
        action = [&] {
            double tol = cfg.tol(kDefaultTol);
            GaussianChannel channel = load_channel(path_a, tol);
            return Outcome{state_to_json(apply_channel(channel, load_state(path_b, tol), tol))};
        };
    });

    auto *classify = app.add_subcommand("classify", "Classify a channel as (strictly) incoherent");
    classify->add_option("channel", path_a)->required();
    classify->callback([&] {
        action = [&] {
            double tol = cfg.tol(kDefaultTol);
            IgoClassification c = classify_incoherent(load_channel(path_a, tol), tol);
            int code = std::holds_alternative<NotIncoherent>(c) ? kNegative : kOk;
            return Outcome{classification_to_json(c), code};
        };
    });

    std::vector<double> thermal_ref;
    auto *petz = app.add_subcommand("petz", "Petz recovery channel for a thermal reference");
    petz->add_option("channel", path_a)->required();
    petz->add_option("--thermal", thermal_ref, "Reference mean photon numbers n1,n2,...")
        ->required()
        ->delimiter(',');
    petz->callback([&] {
        action = [&] {
            double tol = cfg.tol(kDefaultTol);
            GaussianChannel channel = load_channel(path_a, tol);
            return Outcome{channel_to_json(petz_recovery(channel, thermal(thermal_ref), tol))};
        };
    });

    bool with_oracle = false;
    auto *equiv = app.add_subcommand("equiv", "Decide incoherent-unitary equivalence");
    equiv->add_option("a", path_a)->required();
    equiv->add_option("b", path_b)->required();
    equiv->add_flag("--oracle", with_oracle, "Cross-check with the brute-force search (m <= 3)");
    equiv->callback([&] {
        action = [&] {
            double tol = cfg.tol(kEquivalenceTol);
            GaussianState rho = load_state(path_a, cfg.tol(kDefaultTol));
            GaussianState sigma = load_state(path_b, cfg.tol(kDefaultTol));
            EquivalenceVerdict verdict = decide_equivalence(rho, sigma, tol);
            Outcome result{verdict_to_json(verdict), verdict_code(verdict)};
            if (with_oracle) {
                BruteForceOptions options;
                options.tol = tol;
                EquivalenceVerdict reference = brute_force_equivalence(rho, sigma, options);
                result.doc["oracle"] = verdict_to_json(reference);
                result.doc["agree"] = decisive(verdict) ? json(is_equivalent(verdict) == is_equivalent(reference))
                                                        : json(nullptr);
            }
            return result;
        };
    });

    auto *frozen = app.add_subcommand("frozen", "Check whether a strictly incoherent channel freezes coherence");
    frozen->add_option("state", path_a)->required();
    frozen->add_option("channel", path_b)->required();
    frozen->callback([&] {
        action = [&] {
            double tol = cfg.tol(kEquivalenceTol);
            GaussianState rho = load_state(path_a, cfg.tol(kDefaultTol));
            GaussianChannel channel = load_channel(path_b, cfg.tol(kDefaultTol));
            FrozenReport report = is_frozen(rho, channel, tol);
            json doc{{"frozen", report.frozen},
                     {"c_before", report.c_before},
                     {"c_after", report.c_after},
                     {"delta", report.c_after - report.c_before}};
            if (report.equivalence) {
                doc["equivalence"] = verdict_to_json(*report.equivalence);
            }
            return Outcome{doc, report.frozen ? kOk : kNegative};
        };
    });

    auto *make = app.add_subcommand("make", "Build a named state");
    make->require_subcommand(1);

    std::vector<double> n_bars;
    auto *make_thermal = make->add_subcommand("thermal", "Product of thermal modes");
    make_thermal->add_option("--nbar", n_bars, "Mean photon numbers n1,n2,...")->required()->delimiter(',');
    make_thermal->callback([&] { action = [&] { return Outcome{state_to_json(thermal(n_bars))}; }; });

    double alpha_re = 0.0;
    double alpha_im = 0.0;
    double squeeze_r = 0.0;
    double squeeze_theta = 0.0;
    auto *make_coherent = make->add_subcommand("coherent", "Coherent state |alpha>");
    make_coherent->add_option("--re", alpha_re, "Re alpha");
    make_coherent->add_option("--im", alpha_im, "Im alpha");
    make_coherent->callback([&] {
        action = [&] {
            return Outcome{state_to_json(displaced_squeezed({{alpha_re, alpha_im}, {0.0, 0.0}}))};
        };
    });

    auto *make_squeezed = make->add_subcommand("squeezed", "Displaced squeezed state D(alpha) S(beta)|0>");
    make_squeezed->add_option("--re", alpha_re, "Re alpha");
    make_squeezed->add_option("--im", alpha_im, "Im alpha");
    make_squeezed->add_option("--r", squeeze_r, "|beta|")->check(CLI::NonNegativeNumber);
    make_squeezed->add_option("--theta", squeeze_theta, "arg beta");
    make_squeezed->callback([&] {
        action = [&] {
            DisplacedSqueezedParams p{{alpha_re, alpha_im}, std::polar(squeeze_r, squeeze_theta)};
            return Outcome{state_to_json(displaced_squeezed(p))};
        };
    });

    StandardFormParams sf{};
    std::vector<double> sf_mean;
    auto *make_standard = make->add_subcommand("standard-form", "Two-mode standard form [[aI, C], [C, bI]]");
    make_standard->add_option("--a", sf.a)->required();
    make_standard->add_option("--b", sf.b)->required();
    make_standard->add_option("--c", sf.c)->required();
    make_standard->add_option("--d-corr", sf.d_corr)->required();
    make_standard->add_option("--mean", sf_mean, "d as four comma-separated numbers")->delimiter(',');
    make_standard->callback([&] {
        action = [&] {
            Eigen::Vector4d mean = Eigen::Vector4d::Zero();
            if (!sf_mean.empty()) {
                if (sf_mean.size() != 4) {
                    throw Error(ErrorKind::shape_error, "--mean needs four numbers");
                }
                mean = Eigen::Vector4d(sf_mean[0], sf_mean[1], sf_mean[2], sf_mean[3]);
            }
            return Outcome{state_to_json(two_mode_standard_form(sf, mean, cfg.tol(kDefaultTol)))};
        };
    });

    double theta1 = 0.0;
    double theta2 = 0.0;
    auto *sample = app.add_subcommand("sample-class", "Members of a standard-form equivalence class");
    sample->add_option("state", path_a)->required();
    sample->add_option("--theta1", theta1)->required();
    sample->add_option("--theta2", theta2)->required();
    sample->callback([&] {
        action = [&] {
            double tol = cfg.tol(kDefaultTol);
            auto [first, second] = equivalence_class_samples(load_state(path_a, tol), theta1, theta2, tol);
            return Outcome{json{{"first", state_to_json(first)}, {"second", state_to_json(second)}}};
        };
    });

    auto *gen = app.add_subcommand("gen", "Seeded random fixtures");
    gen->require_subcommand(1);
    testing::RandomStateRecipe recipe;
    bool isotropic = false;
    double perturbation = 0.0;
    auto recipe_options = [&](CLI::App *sub) {
        sub->add_option("--modes", recipe.modes, "Mode count")->check(CLI::PositiveNumber);
        sub->add_flag("--hypothesis", recipe.hypothesis, "Couple every mode to another");
        sub->add_flag("--isotropic", isotropic, "No local squeezing and zero mean");
    };
    auto finish_recipe = [&] {
        recipe.seed = cfg.seed;
        if (isotropic) {
            recipe.local_squeeze_max = 0.0;
            recipe.mean_fraction = 0.0;
        }
    };

    auto *gen_state = gen->add_subcommand("state", "Random state");
    recipe_options(gen_state);
    gen_state->callback([&] {
        action = [&] {
            finish_recipe();
            return Outcome{state_to_json(testing::random_state(recipe))};
        };
    });

    auto *gen_pair = gen->add_subcommand("pair", "Planted equivalent pair, optionally perturbed");
    recipe_options(gen_pair);
    gen_pair->add_option("--perturb", perturbation, "Perturb one covariance entry of sigma by this amount")
        ->check(CLI::NonNegativeNumber);
    gen_pair->callback([&] {
        action = [&] {
            finish_recipe();
            testing::EquivalentPair pair = testing::equivalent_pair(recipe);
            json doc{{"rho", state_to_json(pair.rho)}};
            if (perturbation > 0.0) {
                Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
                doc["sigma"] = state_to_json(testing::perturbed(pair.sigma, perturbation, rng));
                doc["perturbation"] = perturbation;
            } else {
                doc["sigma"] = state_to_json(pair.sigma);
                doc["certificate"] = unitary_to_json(pair.planted);
            }
            return Outcome{doc};
        };
    });

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("gcoh");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const std::string &a : argv_store) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << dump_json(error_doc(kind_name(ErrorKind::usage_error), e.what())) << '\n';
        return kInputError;
    } catch (const Error &e) {
        err << dump_json(error_doc(kind_name(e.kind()), e.what())) << '\n';
        return exit_code_for(e.kind());
    }

    try {
        cfg.tol_env = parse_env_tol();
        if (!action) {
            throw Error(ErrorKind::usage_error, "no command given");
        }
        Outcome result = action();
        std::string text = dump_json(result.doc, cfg.pretty) + "\n";
        if (cfg.output.empty()) {
            out << text;
        } else {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file || !(file << text)) {
                throw Error(ErrorKind::io_error, "cannot write '" + cfg.output + "'");
            }
        }
        return result.code;
    } catch (const Error &e) {
        err << dump_json(error_doc(kind_name(e.kind()), e.what())) << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        err << dump_json(error_doc(kind_name(ErrorKind::numeric_error), e.what())) << '\n';
        return kNumericError;
    }
}

}  // namespace gcoh::cli
