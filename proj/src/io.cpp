#include "sunco/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace sunco {

static Json rat_json(const Rat& r) { return rat_str(r); }

static Rat rat_from(const Json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw Error(Err::ParseError, "expected a rational string");
}

static Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (const Rat& x : v) a.push_back(rat_json(x));
    return a;
}

static Vec vec_from(const Json& j) {
    Vec v;
    for (const auto& x : j) v.push_back(rat_from(x));
    return v;
}

Json complex_to_json(const Complex& k) {
    Json j;
    j["ambient_dim"] = k.ambient_dim;
    Json verts = Json::array();
    for (const Vec& v : k.verts) verts.push_back(vec_json(v));
    j["vertices"] = std::move(verts);
    Json facets = Json::array();
    for (const Simplex& s : maximal_cells(k.cells)) facets.push_back(s);
    j["facets"] = std::move(facets);
    return j;
}

Complex complex_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("facets"))
        throw Error(Err::ParseError, "complex object needs vertices and facets");
    std::vector<Vec> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(vec_from(v));
    std::vector<std::vector<int>> facets;
    for (const auto& f : j.at("facets")) {
        std::vector<int> s;
        for (const auto& x : f) s.push_back(x.get<int>());
        facets.push_back(std::move(s));
    }
    Complex k = build_complex(verts, facets);
    if (j.contains("ambient_dim") && j.at("ambient_dim").get<int>() != k.ambient_dim)
        throw Error(Err::ParseError, "ambient_dim disagrees with the coordinates");
    return k;
}

Json partition_to_json(const Partition& p) {
    Json j = Json::array();
    for (int l : p.labels) j.push_back(l);
    return j;
}

Json problem_to_json(const Concordance& c, const std::string& name, uint64_t seed) {
    Json j;
    j["kind"] = "problem";
    j["meta"] = {{"name", name}, {"seed", seed}};
    Json x = complex_to_json(c.xp.base);
    x["labels"] = partition_to_json(c.part);
    j["x"] = std::move(x);
    j["q"] = complex_to_json(c.q);
    j["q_manifold"] = c.q_manifold;
    Json xl = Json::array(), ql = Json::array();
    for (const Rat& t : c.xp.levels) xl.push_back(rat_json(t));
    for (const Rat& t : c.q_levels) ql.push_back(rat_json(t));
    j["x_levels"] = std::move(xl);
    j["q_levels"] = std::move(ql);
    j["f"] = c.fmap;
    return j;
}

Concordance problem_from_json(const Json& j) {
    if (!j.is_object() || j.value("kind", "") != "problem")
        throw Error(Err::ParseError, "not a problem file");
    Concordance c;
    Complex x = complex_from_json(j.at("x"));
    std::vector<int> labels;
    if (j.at("x").contains("labels"))
        for (const auto& l : j.at("x").at("labels")) labels.push_back(l.get<int>());
    else
        labels.assign(x.verts.size(), 1);
    c.q = complex_from_json(j.at("q"));
    c.q_manifold = j.value("q_manifold", true);
    std::vector<Rat> xl, ql;
    for (const auto& t : j.at("x_levels")) xl.push_back(rat_from(t));
    for (const auto& t : j.at("q_levels")) ql.push_back(rat_from(t));
    c.q_levels = std::move(ql);
    c.xp = staircase_tower(x, xl);
    c.part = make_partition(c.xp.base, labels);
    for (const auto& v : j.at("f")) c.fmap.push_back(v.get<int>());
    validate_concordance(c);
    if (c.q_manifold && !manifold_check_small(c.q))
        throw Error(Err::ParseError, "q_manifold set but the small-dimension check failed");
    return c;
}

Json gp_report_to_json(const GPReport& rep) {
    Json j;
    j["codim_ok"] = rep.codim_ok;
    j["nondegenerate_ok"] = rep.nondegenerate_ok;
    Json sing = Json::array();
    for (const Simplex& s : maximal_cells(rep.singular)) sing.push_back(s);
    j["singular_facets"] = std::move(sing);
    Json off = Json::array();
    for (const Simplex& s : rep.offending) off.push_back(s);
    j["offending"] = std::move(off);
    return j;
}

Json run_config_to_json(const RunConfig& cfg) {
    Json j;
    switch (cfg.mode) {
        case PipelineMode::LinkMode: j["mode"] = "link"; break;
        case PipelineMode::DoodleMode: j["mode"] = "doodle"; break;
        case PipelineMode::EpsMode: j["mode"] = "eps"; break;
    }
    j["l"] = cfg.doodle_l;
    j["eps"] = rat_json(cfg.eps);
    j["seed"] = cfg.seed;
    j["magnitude"] = rat_json(cfg.magnitude);
    j["shift"] = rat_json(cfg.shift);
    j["retry_budget"] = cfg.retry_budget;
    j["samples"] = cfg.verify_samples;
    return j;
}

RunConfig run_config_from_json(const Json& j) {
    RunConfig cfg;
    std::string mode = j.value("mode", "link");
    if (mode == "link") cfg.mode = PipelineMode::LinkMode;
    else if (mode == "doodle") cfg.mode = PipelineMode::DoodleMode;
    else if (mode == "eps") cfg.mode = PipelineMode::EpsMode;
    else throw Error(Err::ParseError, "unknown mode " + mode);
    if (j.contains("l")) cfg.doodle_l = j.at("l").get<int>();
    if (j.contains("eps")) cfg.eps = rat_from(j.at("eps"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("magnitude")) cfg.magnitude = rat_from(j.at("magnitude"));
    if (j.contains("shift")) cfg.shift = rat_from(j.at("shift"));
    if (j.contains("retry_budget")) cfg.retry_budget = j.at("retry_budget").get<int>();
    if (j.contains("samples")) cfg.verify_samples = j.at("samples").get<int>();
    return cfg;
}

// ---------------------------------------------------------------------------
// bundle

static Json simplex_json(const Simplex& s) { return Json(s); }

static Simplex simplex_from(const Json& j) {
    std::vector<int> v;
    for (const auto& x : j) v.push_back(x.get<int>());
    return make_simplex(v);
}

static Json fact_json(const OvershadowFact& f) {
    Json j;
    j["a"] = simplex_json(f.a);
    j["b"] = simplex_json(f.b);
    j["interior_b"] = f.interior_b;
    j["verdict"] = f.verdict;
    if (f.witness) {
        j["witness_a"] = vec_json(f.witness->first);
        j["witness_b"] = vec_json(f.witness->second);
        j["gap"] = rat_json(f.max_gap);
    }
    return j;
}

static Json cert_json(const SunnyCertificate& c) {
    Json j;
    j["mode"] = c.mode.name();
    if (c.mode.kind == Mode::Eps) j["eps"] = rat_json(c.mode.eps);
    j["stable"] = c.stable;
    j["verdict"] = c.verdict;
    Json facts = Json::array();
    for (const OvershadowFact& f : c.checked) facts.push_back(fact_json(f));
    j["checked"] = std::move(facts);
    return j;
}

static Json host_json(const Host& h) {
    Json j;
    Json verts = Json::array();
    for (const Vec& v : h.cx.verts) verts.push_back(vec_json(v));
    j["vertices"] = std::move(verts);
    Json facets = Json::array();
    for (const Simplex& s : maximal_cells(h.cx.cells)) facets.push_back(simplex_json(s));
    j["facets"] = std::move(facets);
    Json pf = Json::array(), ht = Json::array(), comp = Json::array();
    for (const Vec& v : h.pf) pf.push_back(vec_json(v));
    for (const Rat& r : h.height) ht.push_back(rat_json(r));
    for (int c : h.comp) comp.push_back(c);
    j["pf"] = std::move(pf);
    j["height"] = std::move(ht);
    j["comp"] = std::move(comp);
    return j;
}

static Json seq_json(const CollapseSequence& seq) {
    Json j;
    Json steps = Json::array();
    for (const ElementaryStep& st : seq.steps)
        steps.push_back(Json::array({simplex_json(st.coface), simplex_json(st.free_face)}));
    j["steps"] = std::move(steps);
    Json groups = Json::array();
    for (const SimpleGroup& g : seq.groups) {
        Json gj;
        gj["begin"] = g.begin;
        gj["end"] = g.end;
        gj["kind"] = g.kind;
        gj["certificate"] = cert_json(g.cert);
        groups.push_back(std::move(gj));
    }
    j["groups"] = std::move(groups);
    return j;
}

Json bundle_to_json(const PipelineResult& res, const RunConfig& cfg, const Json& problem_echo) {
    Json j;
    j["kind"] = "bundle";
    j["config"] = run_config_to_json(cfg);
    j["problem"] = problem_echo;
    j["perturbed_f"] = res.conc.fmap;
    j["gp_report"] = gp_report_to_json(res.gp);
    j["sunny_host"] = host_json(res.sunny_host);
    j["sunny"] = seq_json(res.sunny_seq);
    j["stable_host_vertices"] = host_json(res.stab.host)["vertices"];
    j["stable"] = seq_json(res.stab.seq);
    Json f0 = Json::array(), f1 = Json::array();
    for (const Vec& v : res.level_map.f0_q) f0.push_back(vec_json(v));
    for (const Vec& v : res.level_map.f1_q) f1.push_back(vec_json(v));
    j["endpoints"] = {{"f0", std::move(f0)},
                      {"f1", std::move(f1)},
                      {"time_reversed", res.level_map.time_reversed}};
    Json rep;
    rep["ok"] = res.report.ok;
    rep["lines"] = res.report.lines;
    j["report"] = std::move(rep);
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Err::ParseError, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(Err::ParseError, std::string("bad JSON: ") + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(Err::ParseError, "cannot write " + path);
    out << j.dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// bundle verification

static void compare_seq(const CollapseSequence& got, const Json& recorded,
                        const std::string& what, std::vector<std::string>& bad) {
    const Json& steps = recorded.at("steps");
    if (steps.size() != got.steps.size()) {
        bad.push_back(what + ": step count differs from the canonical derivation");
        return;
    }
    for (size_t i = 0; i < got.steps.size(); ++i) {
        if (simplex_from(steps[i][0]) != got.steps[i].coface ||
            simplex_from(steps[i][1]) != got.steps[i].free_face) {
            bad.push_back(what + ": step " + std::to_string(i) +
                          " differs from the canonical derivation");
            return;
        }
    }
    const Json& groups = recorded.at("groups");
    if (groups.size() != got.groups.size()) {
        bad.push_back(what + ": group count differs");
        return;
    }
    for (size_t g = 0; g < got.groups.size(); ++g) {
        if (groups[g].at("begin").get<size_t>() != got.groups[g].begin ||
            groups[g].at("end").get<size_t>() != got.groups[g].end) {
            bad.push_back(what + ": group " + std::to_string(g) + " boundaries differ");
            return;
        }
        if (groups[g].at("certificate").at("verdict").get<bool>() != got.groups[g].cert.verdict) {
            bad.push_back(what + ": group " + std::to_string(g) + " certificate verdict differs");
            return;
        }
        const Json& facts = groups[g].at("certificate").at("checked");
        if (facts.size() != got.groups[g].cert.checked.size()) {
            bad.push_back(what + ": group " + std::to_string(g) + " checked-facts count differs");
            return;
        }
        for (size_t fi = 0; fi < facts.size(); ++fi) {
            const OvershadowFact& f = got.groups[g].cert.checked[fi];
            if (simplex_from(facts[fi].at("a")) != f.a || simplex_from(facts[fi].at("b")) != f.b ||
                facts[fi].at("verdict").get<bool>() != f.verdict) {
                bad.push_back(what + ": group " + std::to_string(g) + " fact " +
                              std::to_string(fi) + " differs on re-decision");
                return;
            }
        }
    }
}

// replay the recorded steps as raw claims against a host complex
static void replay_recorded(const Complex& ambient, const Json& recorded, const SimplexSet& from,
                            const SimplexSet& to, const std::string& what,
                            std::vector<std::string>& bad) {
    CollapseSequence seq;
    for (const auto& st : recorded.at("steps"))
        seq.steps.push_back({simplex_from(st[0]), simplex_from(st[1])});
    ReplayResult rr = verify_collapse(ambient, seq, from, to);
    if (!rr.ok) bad.push_back(what + ": recorded steps fail replay: " + rr.reason);
}

// witnesses must re-evaluate to equal projections and a positive height gap
static void recheck_witnesses(const Host& h, const Json& recorded, const std::string& what,
                              std::vector<std::string>& bad) {
    for (const auto& gj : recorded.at("groups")) {
        for (const auto& fj : gj.at("certificate").at("checked")) {
            if (!fj.at("verdict").get<bool>()) continue;
            if (!fj.contains("witness_a")) {
                bad.push_back(what + ": true fact without witness");
                return;
            }
            Vec wa = vec_from(fj.at("witness_a"));
            Vec wb = vec_from(fj.at("witness_b"));
            Vec pa = host_pf_at(h, wa), pb = host_pf_at(h, wb);
            if (pa != pb) {
                bad.push_back(what + ": witness projections differ");
                return;
            }
            // heights: evaluate Pi F via carriers
            auto height_at = [&](const Vec& z) {
                auto car = carrier_of_point(h.cx, z);
                auto lam = barycentric_coords(h.cx.cell_points(*car), z);
                Rat ht = 0;
                for (size_t i = 0; i < car->size(); ++i)
                    ht += (*lam)[i] * h.height[static_cast<size_t>((*car)[i])];
                return ht;
            };
            if (!(height_at(wa) > height_at(wb))) {
                bad.push_back(what + ": witness heights are not strictly ordered");
                return;
            }
        }
    }
}

std::vector<std::string> verify_bundle(const Json& bundle) {
    std::vector<std::string> bad;
    if (bundle.value("kind", "") != "bundle") {
        bad.push_back("not a bundle file");
        return bad;
    }
    RunConfig cfg = run_config_from_json(bundle.at("config"));
    Concordance conc = problem_from_json(bundle.at("problem"));

    // adopt the recorded perturbed map, then re-derive everything else
    Concordance pert = conc;
    pert.fmap.clear();
    for (const auto& v : bundle.at("perturbed_f")) pert.fmap.push_back(v.get<int>());
    try {
        validate_concordance(pert);
    } catch (const Error& e) {
        bad.push_back(std::string("perturbed map invalid: ") + e.what());
        return bad;
    }
    for (size_t v = 0; v < pert.fmap.size(); ++v) {
        if (pert.qtower().vlevel(pert.fmap[v]) != conc.qtower().vlevel(conc.fmap[v])) {
            bad.push_back("perturbation moved an image level");
            return bad;
        }
    }
    GPReport gp = check_general_position(pert);
    if (!gp.ok()) {
        bad.push_back("perturbed map is not in general position");
        return bad;
    }
    if (gp.codim_ok != bundle.at("gp_report").at("codim_ok").get<bool>() ||
        gp.nondegenerate_ok != bundle.at("gp_report").at("nondegenerate_ok").get<bool>())
        bad.push_back("gp report differs");

    // canonical re-derivation
    PipelineResult res;
    try {
        RunConfig cfg2 = cfg;
        res = pipeline(pert, cfg2);
    } catch (const Error& e) {
        bad.push_back(std::string("canonical re-derivation failed: ") + e.what());
        return bad;
    }

    // host integrity
    {
        const Json& hv = bundle.at("sunny_host").at("vertices");
        if (hv.size() != res.sunny_host.cx.verts.size()) {
            bad.push_back("sunny host vertex count differs");
        } else {
            for (size_t v = 0; v < hv.size(); ++v)
                if (vec_from(hv[v]) != res.sunny_host.cx.verts[v]) {
                    bad.push_back("sunny host vertex " + std::to_string(v) + " differs");
                    break;
                }
        }
        const Json& hh = bundle.at("sunny_host").at("height");
        if (hh.size() == res.sunny_host.height.size()) {
            for (size_t v = 0; v < hh.size(); ++v)
                if (rat_from(hh[v]) != res.sunny_host.height[v]) {
                    bad.push_back("sunny host height " + std::to_string(v) + " differs");
                    break;
                }
        } else {
            bad.push_back("sunny host height table size differs");
        }
    }
    {
        const Json& kv = bundle.at("stable_host_vertices");
        if (kv.size() != res.stab.host.cx.verts.size()) {
            bad.push_back("stable host vertex count differs");
        } else {
            for (size_t v = 0; v < kv.size(); ++v)
                if (vec_from(kv[v]) != res.stab.host.cx.verts[v]) {
                    bad.push_back("stable host vertex " + std::to_string(v) + " differs");
                    break;
                }
        }
    }

    compare_seq(res.sunny_seq, bundle.at("sunny"), "sunny", bad);
    compare_seq(res.stab.seq, bundle.at("stable"), "stable", bad);

    replay_recorded(res.sunny_host.cx, bundle.at("sunny"), res.sunny_seq.from, res.sunny_seq.to,
                    "sunny", bad);
    replay_recorded(res.stab.host.cx, bundle.at("stable"), res.stab.seq.from, res.stab.seq.to,
                    "stable", bad);

    recheck_witnesses(res.sunny_host, bundle.at("sunny"), "sunny", bad);
    recheck_witnesses(res.stab.host, bundle.at("stable"), "stable", bad);

    // endpoints
    {
        const Json& ep = bundle.at("endpoints");
        if (ep.at("f0").size() != res.level_map.f0_q.size()) {
            bad.push_back("endpoint table size differs");
        } else {
            for (size_t v = 0; v < res.level_map.f0_q.size(); ++v) {
                if (vec_from(ep.at("f0")[v]) != res.level_map.f0_q[v] ||
                    vec_from(ep.at("f1")[v]) != res.level_map.f1_q[v]) {
                    bad.push_back("endpoint data differs at vertex " + std::to_string(v));
                    break;
                }
            }
        }
    }
    if (!res.report.ok) bad.push_back("re-run verification failed");
    if (bundle.at("report").at("ok").get<bool>() != res.report.ok)
        bad.push_back("recorded verification flag differs");
    return bad;
}

}  // namespace sunco
