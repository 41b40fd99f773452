#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run_env(const std::string& env, const std::string& args) {
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(RMCHECK_BIN) + " " + args +
                      " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.output.append(buf.data(), got);
    int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

RunResult run(const std::string& args) { return run_env("", args); }

// minimal structural validator for the subset of JSON Schema the report
// schema uses: type, required, properties, items, enum, oneOf
bool validates(const json& value, const json& schema);

bool type_matches(const json& value, const std::string& t) {
    if (t == "object") return value.is_object();
    if (t == "array") return value.is_array();
    if (t == "string") return value.is_string();
    if (t == "boolean") return value.is_boolean();
    if (t == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (t == "number") return value.is_number();
    return false;
}

bool validates(const json& value, const json& schema) {
    if (schema.contains("oneOf")) {
        int hit = 0;
        for (const auto& sub : schema["oneOf"])
            if (validates(value, sub)) ++hit;
        return hit == 1;
    }
    if (schema.contains("enum")) {
        for (const auto& e : schema["enum"])
            if (value == e) return true;
        return false;
    }
    if (schema.contains("type") && !type_matches(value, schema["type"].get<std::string>()))
        return false;
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>())) return false;
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (value.contains(it.key()) && !validates(value.at(it.key()), it.value()))
                    return false;
    }
    if (value.is_array() && schema.contains("items"))
        for (const auto& el : value)
            if (!validates(el, schema["items"])) return false;
    return true;
}

json load_schema() {
    std::ifstream f(RMK_SCHEMA_PATH);
    REQUIRE(f.good());
    json s;
    f >> s;
    return s;
}

json strip_timing(json j) {
    j.erase("timing_ms");
    return j;
}

}  // namespace

TEST_CASE("ring golden values") {
    CHECK(run("ring dual --k 2 --l 4").output ==
          "t1^4+t1^3*t2+t1^2*t2^2+t1*t2^3+t2^4\n");
    CHECK(run("ring dual --k 2 --l 5").output ==
          "t1^5+t1^4*t2+t1^3*t2^2+t1^2*t2^3+t1*t2^4+t2^5\n");
    CHECK(run("ring euler-rattray --k 2 --m 6").output == "t1^6+t1^4*t2^2+t1^2*t2^4+t2^6\n");
    CHECK(run("ring w3 --component test --m 1").output == "y^2*t+y*w+y*t^2\n");
    CHECK(run("ring euler-makeev --k 2 --l 2 --m 1 --orth").output == "t1+t2\n");
    CHECK(run("ring d8 --component euler --m 3").output == "y^3\n");
    CHECK(run("ring d8 --component bogus").exit_code == 2);
}

TEST_CASE("check exit codes partition the outcomes") {
    auto adm = run("check rattray --n 5 --m 6 --k 2 --variant odd-sym --orth");
    CHECK(adm.exit_code == 0);
    CHECK(adm.output.find("decided by criterion") == 0);

    auto not_dec = run("check rattray --n 2 --m 1 --k 2 --variant odd-sym --orth");
    CHECK(not_dec.exit_code == 10);
    CHECK(not_dec.output.find("not decided by criterion") == 0);

    CHECK(run("check makeev --n 3 --m 1 --k 2 --l 2 --orth").exit_code == 0);
    CHECK(run("check rattray2 --n 5 --m 6").exit_code == 0);
    CHECK(run("check rattray2 --n 5 --m 7").exit_code == 10);
    CHECK(run("check rattray3 --n 3 --m 1").exit_code == 0);

    CHECK(run("check rattray --n 2 --m 1 --k 3 --variant odd-sym").exit_code == 2);
    CHECK(run("check rattray --n 4 --m 1").exit_code == 2);
    CHECK(run("check makeev --n 3 --m 1 --k 2 --l 5").exit_code == 2);
    CHECK(run("check bogus").exit_code == 2);
}

TEST_CASE("table sweeps") {
    auto csv = run("table --n 3..5 --m 1..6 --k 2..3 --variant odd-sym --orth --format csv");
    REQUIRE(csv.exit_code == 0);
    std::istringstream lines(csv.output);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,m,k,l,variant,verdict,bounds_fired,slice_degree,slice_dim,ideal_rank");
    long rows = 0;
    bool has562 = false;
    while (std::getline(lines, line)) {
        ++rows;
        if (line.rfind("5,6,2,", 0) == 0)
            has562 = line.find("decided_admissible") != std::string::npos;
    }
    CHECK(rows == 3 * 6 * 2);  // grid cardinality
    CHECK(has562);

    // deterministic across job counts
    auto j1 = run("table --n 3..5 --m 1..4 --k 2..3 --orth --format csv --jobs 1");
    auto j4 = run("table --n 3..5 --m 1..4 --k 2..3 --orth --format csv --jobs 4");
    CHECK(j1.output == j4.output);

    // empty grid is a usage error
    CHECK(run("table --n 5..3 --m 1 --k 2").exit_code == 2);

    // capped rows survive
    auto capped = run("table --n 3..4 --m 9..9 --k 3 --orth --degree-cap 5 --format csv");
    CHECK(capped.output.find("capped") != std::string::npos);
}

TEST_CASE("json reports validate against the committed schema") {
    json schema = load_schema();

    auto chk = run("--json check rattray --n 5 --m 6 --k 2 --variant odd-sym --orth");
    CHECK(chk.exit_code == 0);
    json rep = json::parse(chk.output);
    CHECK(validates(rep, schema));
    CHECK(rep["results"][0]["verdict"] == "decided_admissible");
    CHECK(rep["results"][0]["certificate"]["member"] == false);

    auto member = run("--json check rattray --n 2 --m 1 --k 2 --variant odd-sym --orth");
    json mrep = json::parse(member.output);
    CHECK(validates(mrep, schema));
    CHECK(mrep["results"][0]["certificate"]["member"] == true);
    // the test element t1+t2 is the first dual-class generator itself
    auto combo = mrep["results"][0]["certificate"]["combination"];
    REQUIRE(combo.size() == 1);
    CHECK(combo[0]["generator"] == 0);
    CHECK(combo[0]["multipliers"] == json::array({"1"}));

    auto tab = run("table --n 3..4 --m 1..2 --k 2 --orth --format json");
    json trep = json::parse(tab.output);
    CHECK(validates(trep, schema));
    CHECK(trep["results"].size() == 4);

    auto ring = run("--json ring dual --k 2 --l 5");
    CHECK(validates(json::parse(ring.output), schema));

    auto wit = run("--json witness frame --n 3 --k 2 --m 1 --seed 3 --restarts 30");
    CHECK(wit.exit_code == 0);
    json wrep = json::parse(wit.output);
    CHECK(validates(wrep, schema));
    CHECK(wrep["results"][0]["success"] == true);
}

TEST_CASE("identical command and seed give byte-identical reports modulo timing") {
    auto a = run("--json check rattray --n 4 --m 2 --k 2 --variant odd --orth");
    auto b = run("--json check rattray --n 4 --m 2 --k 2 --variant odd --orth");
    CHECK(strip_timing(json::parse(a.output)) == strip_timing(json::parse(b.output)));

    auto wa = run("--json witness frame --n 3 --k 3 --m 1 --seed 11 --restarts 40");
    auto wb = run("--json witness frame --n 3 --k 3 --m 1 --seed 11 --restarts 40");
    CHECK(strip_timing(json::parse(wa.output)) == strip_timing(json::parse(wb.output)));
}

TEST_CASE("witness subcommands") {
    auto frame = run("witness frame --n 3 --k 3 --m 1 --seed 1 --restarts 60");
    CHECK(frame.exit_code == 0);
    CHECK(frame.output.find("witness found") == 0);

    // malformed measure file
    {
        std::ofstream bad("/tmp/rmk_bad_measure.txt");
        bad << "1.0 2.0\nnot numbers here\n";
    }
    CHECK(run("witness equipart --n 2 --k 2 --l 2 --measure /tmp/rmk_bad_measure.txt --seed 1")
              .exit_code == 2);
    CHECK(run("witness equipart --n 2 --k 2 --l 2 --measure /tmp/rmk_missing.txt --seed 1")
              .exit_code == 2);

    // a small planar equipartition through the full CLI path
    auto eq = run("witness equipart --n 2 --k 2 --l 2 --measure gauss:8000 --seed 2 "
                  "--tol 2e-2 --restarts 8");
    CHECK(eq.exit_code == 0);
}

TEST_CASE("version flag") {
    auto v = run("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("reports can be written to a file") {
    const char* path = "/tmp/rmk_report_out.json";
    std::remove(path);
    auto r = run(std::string("--json --out ") + path +
                 " check rattray --n 5 --m 6 --k 2 --variant odd-sym --orth");
    CHECK(r.exit_code == 0);
    CHECK(r.output.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    json rep;
    f >> rep;
    CHECK(rep["results"][0]["verdict"] == "decided_admissible");
    std::remove(path);
}

TEST_CASE("RMCHECK_JOBS selects the default worker count") {
    auto env = run_env("RMCHECK_JOBS=2", "table --n 3..5 --m 1..4 --k 2..3 --orth --format csv");
    auto plain = run("table --n 3..5 --m 1..4 --k 2..3 --orth --format csv --jobs 2");
    CHECK(env.exit_code == 0);
    CHECK(env.output == plain.output);
}
