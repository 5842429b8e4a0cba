#include "raqsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace raqsim {

std::string scheme_name(const Scheme& s) {
    switch (s.kind) {
        case SchemeKind::raq_dp: return "raq-dp";
        case SchemeKind::raq_random: return "raq-random";
        case SchemeKind::vq_dp: return "vq-dp";
        case SchemeKind::vq_random: return "vq-random";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name, int vq_bits) {
    Scheme s;
    s.fixed_bits = vq_bits;
    if (name == "raq-dp") s.kind = SchemeKind::raq_dp;
    else if (name == "raq-random") s.kind = SchemeKind::raq_random;
    else if (name == "vq-dp") s.kind = SchemeKind::vq_dp;
    else if (name == "vq-random") s.kind = SchemeKind::vq_random;
    else
        throw std::invalid_argument(
            "unknown scheme '" + name +
            "' (expected raq-dp, raq-random, vq-dp or vq-random)");
    return s;
}

bool scheme_is_random(const Scheme& s) {
    return s.kind == SchemeKind::raq_random || s.kind == SchemeKind::vq_random;
}

bool scheme_is_vq(const Scheme& s) {
    return s.kind == SchemeKind::vq_dp || s.kind == SchemeKind::vq_random;
}

int ExperimentConfig::effective_bits_per_rb() const {
    return bits_per_rb > 0 ? bits_per_rb : default_bits_per_rb(modulation);
}

int ExperimentConfig::max_views() const {
    return *std::max_element(views.begin(), views.end());
}

SynthParams ExperimentConfig::synth_params(int num_views) const {
    SynthParams p;
    p.classes = classes;
    p.views = num_views;
    p.height = height;
    p.width = width;
    p.levels = levels;
    p.density = density;
    p.density_view_step = density_view_step;
    p.band_sigma = band_sigma;
    p.noise_amp = noise_amp;
    return p;
}

void ExperimentConfig::validate() const {
    if (classes < 2) throw std::invalid_argument("classes must be >= 2");
    if (train_count < classes) throw std::invalid_argument("train_count must cover every class");
    if (test_count < 1) throw std::invalid_argument("test_count must be >= 1");
    if (options.empty()) throw std::invalid_argument("option set must not be empty");
    for (const auto& [w, beta] : options) {
        if (w < 1 || w > 16) throw std::invalid_argument("option bits_per_index must be in 1..16");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("option scale must be in (0, 1]");
    }
    if (schemes.empty()) throw std::invalid_argument("scheme list must not be empty");
    for (const auto& s : schemes) {
        if (scheme_is_vq(s)) {
            const bool known = std::any_of(options.begin(), options.end(),
                                           [&](const auto& o) { return o.first == s.fixed_bits; });
            if (!known)
                throw std::invalid_argument("vq_bits " + std::to_string(s.fixed_bits) +
                                            " is not one of the configured options");
        }
    }
    if (views.empty() || budgets.empty() || snrs_db.empty() || seeds.empty())
        throw std::invalid_argument("sweep lists must not be empty");
    for (int k : views)
        if (k < 1) throw std::invalid_argument("view counts must be >= 1");
    for (int b : budgets)
        if (b < 0) throw std::invalid_argument("budgets must be >= 0");
    if (entropy_window < 1 || entropy_window % 2 == 0)
        throw std::invalid_argument("entropy_window must be odd");
    if (grid_h < 1 || grid_w < 1 || feat_dim < 1) throw std::invalid_argument("bad feature grid");
    if (height % grid_h != 0 || width % grid_w != 0)
        throw std::invalid_argument("image does not divide into the patch grid");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    if (codebook_sample_cap < 1) throw std::invalid_argument("codebook_sample_cap must be >= 1");
    if (train_dir.empty() != test_dir.empty())
        throw std::invalid_argument("train_dir and test_dir must be set together");
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.bits_per_rb = 21;  // keeps the 10/14/19 RB ladder at M = 49
    cfg.schemes = {parse_scheme("raq-dp", cfg.vq_bits), parse_scheme("raq-random", cfg.vq_bits),
                   parse_scheme("vq-dp", cfg.vq_bits), parse_scheme("vq-random", cfg.vq_bits)};
    cfg.views = {3};
    cfg.budgets = {42};
    cfg.snrs_db = {5.0};
    cfg.seeds = {1};
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad integer '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg = default_config();
    std::set<std::string> seen;
    std::vector<std::string> scheme_names;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key or value");
        if (!seen.insert(key).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");

        if (key == "classes") cfg.classes = to_int(key, value);
        else if (key == "train_count") cfg.train_count = to_int(key, value);
        else if (key == "test_count") cfg.test_count = to_int(key, value);
        else if (key == "height") cfg.height = to_int(key, value);
        else if (key == "width") cfg.width = to_int(key, value);
        else if (key == "levels") cfg.levels = to_int(key, value);
        else if (key == "density") cfg.density = to_double(key, value);
        else if (key == "density_view_step") cfg.density_view_step = to_double(key, value);
        else if (key == "band_sigma") cfg.band_sigma = to_double(key, value);
        else if (key == "noise_amp") cfg.noise_amp = to_double(key, value);
        else if (key == "train_dir") cfg.train_dir = value;
        else if (key == "test_dir") cfg.test_dir = value;
        else if (key == "grid_h") cfg.grid_h = to_int(key, value);
        else if (key == "grid_w") cfg.grid_w = to_int(key, value);
        else if (key == "feat_dim") cfg.feat_dim = to_int(key, value);
        else if (key == "tau") cfg.tau = to_double(key, value);
        else if (key == "codebook_sample_cap") cfg.codebook_sample_cap = to_int(key, value);
        else if (key == "options") {
            cfg.options.clear();
            for (const auto& item : split_list(value)) {
                const size_t colon = item.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("config key 'options': expected w:beta, got '" +
                                                item + "'");
                cfg.options.emplace_back(to_int("options", trim(item.substr(0, colon))),
                                         to_double("options", trim(item.substr(colon + 1))));
            }
        } else if (key == "vq_bits") cfg.vq_bits = to_int(key, value);
        else if (key == "bits_per_rb") cfg.bits_per_rb = to_int(key, value);
        else if (key == "fading") {
            if (value == "rayleigh") cfg.fading = Fading::rayleigh;
            else if (value == "awgn") cfg.fading = Fading::awgn_only;
            else throw std::invalid_argument("config key 'fading': expected rayleigh or awgn");
        } else if (key == "modulation") {
            if (value == "qpsk") cfg.modulation = Modulation::qpsk;
            else if (value == "16qam") cfg.modulation = Modulation::qam16;
            else throw std::invalid_argument("config key 'modulation': expected qpsk or 16qam");
        } else if (key == "entropy_window") cfg.entropy_window = to_int(key, value);
        else if (key == "schemes") scheme_names = split_list(value);
        else if (key == "views") {
            cfg.views.clear();
            for (const auto& v : split_list(value)) cfg.views.push_back(to_int(key, v));
        } else if (key == "budgets") {
            cfg.budgets.clear();
            for (const auto& v : split_list(value)) cfg.budgets.push_back(to_int(key, v));
        } else if (key == "snrs_db") {
            cfg.snrs_db.clear();
            for (const auto& v : split_list(value)) cfg.snrs_db.push_back(to_double(key, v));
        } else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& v : split_list(value))
                cfg.seeds.push_back(static_cast<std::uint64_t>(std::stoull(v)));
        } else if (key == "out") cfg.out_path = value;
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    if (!scheme_names.empty()) {
        cfg.schemes.clear();
        for (const auto& n : scheme_names) cfg.schemes.push_back(parse_scheme(n, cfg.vq_bits));
    } else {
        for (auto& s : cfg.schemes) s.fixed_bits = cfg.vq_bits;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace raqsim
