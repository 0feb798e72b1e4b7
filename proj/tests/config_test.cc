// Copyright 2026 The spssvs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spssvs/config.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "spssvs/format.h"

using namespace spssvs;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST(config, parse_real_literals) {
    EXPECT_EQ(parse_real("0.3"), 0.3);
    EXPECT_EQ(parse_real("-1e-3"), -1e-3);
    EXPECT_EQ(parse_real("pi"), kPi);
    EXPECT_EQ(parse_real("-pi"), -kPi);
    EXPECT_NEAR(parse_real("8pi/9"), 8 * kPi / 9, 1e-15);
    EXPECT_NEAR(parse_real("5*pi/12"), 5 * kPi / 12, 1e-15);
    EXPECT_NEAR(parse_real("pi/2"), kPi / 2, 1e-16);
    EXPECT_NEAR(parse_real(" 17pi/18 "), 17 * kPi / 18, 1e-15);
    for (const char *bad : {"", "abc", "pi/", "1..2", "2x", "1/0"}) {
        EXPECT_THROW(parse_real(bad), Error) << bad;
    }
}

TEST(config, defaults) {
    MeasurementConfig c;
    EXPECT_EQ(c.theta, 0);
    EXPECT_NEAR(c.delta, kPi / 2, 1e-16);
    EXPECT_NEAR(c.phi, kPi / 2, 1e-16);
    EXPECT_NEAR(c.sigma, 1 / std::sqrt(2.0), 2e-16);
    EXPECT_EQ(c.n_measurements, 1);
    EXPECT_EQ(c.truncation.mode, TruncationPolicy::Mode::Adaptive);
    EXPECT_NO_THROW(c.validate());
}

TEST(config, settings_and_validation) {
    MeasurementConfig c;
    apply_setting(c, "alpha", "8pi/9");
    apply_setting(c, "N", "40");
    apply_setting(c, "dim", "96");
    EXPECT_NEAR(c.alpha, 8 * kPi / 9, 1e-15);
    EXPECT_EQ(c.n_measurements, 40);
    EXPECT_EQ(c.truncation.mode, TruncationPolicy::Mode::Fixed);
    EXPECT_EQ(c.truncation.fixed_dim, 96);
    EXPECT_THROW(apply_setting(c, "colour", "1"), Error);
    EXPECT_THROW(apply_setting(c, "N", "0"), Error);
    EXPECT_THROW(apply_setting(c, "truncation", "sometimes"), Error);
    MeasurementConfig bad;
    bad.alpha = kPi;
    EXPECT_THROW(bad.validate(), Error);
    bad = MeasurementConfig{};
    bad.sigma = 0;
    EXPECT_THROW(bad.validate(), Error);
}

TEST(config, text_round_trip) {
    MeasurementConfig c;
    c.r = 0.3;
    c.theta = 5 * kPi / 12;
    c.alpha = 8 * kPi / 9;
    c.s = 0.1 + 0.2;
    c.n_measurements = 7;
    c.truncation = TruncationPolicy::adaptive(1e-13, 768);
    std::string echo = config_echo(c);
    MeasurementConfig back = parse_config_text(echo);
    EXPECT_EQ(config_entries(back), config_entries(c));
    EXPECT_EQ(back.s, c.s);
    EXPECT_EQ(back.theta, c.theta);
    EXPECT_EQ(back.truncation.tail_tol, 1e-13);
    EXPECT_EQ(back.truncation.hard_cap, 768);

    c.truncation = TruncationPolicy::fixed(80);
    MeasurementConfig fixed = parse_config_text(config_echo(c));
    EXPECT_EQ(fixed.truncation.mode, TruncationPolicy::Mode::Fixed);
    EXPECT_EQ(fixed.truncation.fixed_dim, 80);
}

TEST(config, reads_output_files) {
    std::string file =
        "#@ command = moments\n"
        "#@ r = 0.75\n"
        "#@ alpha = 2\n"
        "# free comment\n"
        "quantity,analytic,oracle\n"
        "n_mean,1,1\n";
    MeasurementConfig c = parse_config_text(file);
    EXPECT_EQ(c.r, 0.75);
    EXPECT_EQ(c.alpha, 2);
    EXPECT_THROW(parse_config_text("r 0.5\n"), Error);
}

TEST(config, json_documents) {
    MeasurementConfig c = parse_config_text(R"({"config": {"r": 0.4, "alpha": "pi/3", "truncation": "fixed", "dim": 50}})");
    EXPECT_EQ(c.r, 0.4);
    EXPECT_NEAR(c.alpha, kPi / 3, 1e-16);
    EXPECT_EQ(c.truncation.fixed_dim, 50);
    EXPECT_THROW(parse_config_text("{ not json"), Error);
}

TEST(config, sweep_spec) {
    SweepSpec s = SweepSpec::parse("alpha:0:8pi/9:5");
    EXPECT_EQ(s.variable, "alpha");
    EXPECT_EQ(s.steps, 5);
    EXPECT_EQ(s.value(0), 0);
    EXPECT_NEAR(s.value(4), 8 * kPi / 9, 1e-15);
    MeasurementConfig base;
    base.alpha = 1;
    EXPECT_NEAR(s.at(base, 2).alpha, 4 * kPi / 9, 1e-15);
    EXPECT_EQ(SweepSpec::parse(s.to_string()).stop, s.stop);
    for (const char *bad : {"s:1:0:5", "s:0:1:1", "sigma:0:1:4", "s:0:1", "q:0:1:3"}) {
        EXPECT_THROW(SweepSpec::parse(bad), Error) << bad;
    }
}

TEST(format, numbers) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1), "1");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_STREQ(json_sentinel(std::numeric_limits<double>::infinity()), "Infinity");
    EXPECT_STREQ(json_sentinel(std::nan("")), "NaN");
    EXPECT_EQ(json_sentinel(1.0), nullptr);
}
