// Copyright 2025-present the fresnelio project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

std::string tool_path() {
#ifdef FRESNELIO_TOOL
    return FRESNELIO_TOOL;
#else
    return "./fresnelio";
#endif
}

int run(const std::string& args) {
    const std::string cmd = tool_path() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("happy path writes csv and passing summary") {
    REQUIRE(run("--out cli_t1 fresnel --f constant1 --method all") == 0);
    const std::string csv = slurp("cli_t1/fresnel.csv");
    CHECK(csv.find("# fresnel") == 0);
    CHECK(csv.find("\r\n") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp("cli_t1/fresnel_summary.json"));
    CHECK(j.at("pass").get<bool>());
}

TEST_CASE("divergent input fails the convergence assertion with exit 1") {
    CHECK(run("--out cli_t2 fresnel --f chirp-minus --method direct") == 1);
    const auto j = nlohmann::json::parse(slurp("cli_t2/fresnel_summary.json"));
    CHECK(!j.at("pass").get<bool>());
}

TEST_CASE("invalid configs exit with 2") {
    CHECK(run("--out cli_t3 fresnel --f '{\"dim\":1,\"kind\":\"nope\",\"params\":{}}'") == 2);
    CHECK(run("--out cli_t3 ltopo --preset not-a-preset") == 2);
}

TEST_CASE("config file dispatch and unknown-field rejection") {
    {
        std::ofstream f("cli_cfg.json");
        f << R"({"experiment":"fresnel","f":{"dim":1,"kind":"constant","params":{"value":[1.0,0.0]}},"method":"all","out":"cli_t4"})";
    }
    CHECK(run("--config cli_cfg.json") == 0);
    {
        std::ofstream f("cli_cfg_bad.json");
        f << R"({"experiment":"fresnel","mystery":1})";
    }
    CHECK(run("--config cli_cfg_bad.json") == 2);
}

TEST_CASE("sequence-function json drives the sequential functional") {
    {
        std::ofstream f("cli_seq.json");
        f << R"({"kind":"gaussian_l1","coef":[0.5,0.25,0.125],"tail":{"type":"geometric","ratio":0.5,"scale":1.0,"from":1}})";
    }
    CHECK(run("--out cli_t6 lprime --sequence cli_seq.json") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_t6/lprime_summary.json"));
    CHECK(j.at("pass").get<bool>());
}

TEST_CASE("reruns byte-reproduce the csv") {
    REQUIRE(run("--out cli_t5 norm-ln --q 1,0.5") == 0);
    const std::string first = slurp("cli_t5/norm-ln.csv");
    REQUIRE(run("--out cli_t5 norm-ln --q 1,0.5") == 0);
    CHECK(first == slurp("cli_t5/norm-ln.csv"));
}
