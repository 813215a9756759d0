// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>

#include "nqsdyn/config.hpp"

namespace nqsdyn {
namespace {

const std::string kMinimal = "[model]\nlength = 6\nj1 = 1\nj2 = 0.2\n";

std::string error_of(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ValidationError &e) {
    return e.what();
  }
  return "";
}

TEST(Config, MinimalFileUsesDefaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.model, (ModelSpec{6, 1.0, 0.2, true}));
  EXPECT_EQ(c.hidden_units(), 24);
  EXPECT_EQ(c.sampling_mode, SamplingMode::kMonteCarlo);
  EXPECT_EQ(c.sampler, SamplerPlan{});
  EXPECT_EQ(c.momenta(), (std::vector<int>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(c.cv.sr, c.sr);
  EXPECT_EQ(c.sweep.source_site, 0);
}

TEST(Config, ShippedConfigsRoundTrip) {
  int seen = 0;
  for (const auto &entry : std::filesystem::directory_iterator(NQSDYN_SOURCE_DIR "/configs")) {
    if (entry.path().extension() != ".ini") continue;
    const RunConfig c = load_config(entry.path());
    const std::string text = format_config(c);
    EXPECT_EQ(parse_config(text), c) << entry.path();
    EXPECT_EQ(format_config(parse_config(text)), text);
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

TEST(Config, ParsesEverySection) {
  const RunConfig c = parse_config(kMinimal +
                                   "periodic = off\n"
                                   "[rbm]\nn_hidden = 10\ninit_scale = 0.05\nseed = 9\n"
                                   "[sampler]\nmode = exact\nchains = 2\nsamples = 50\n"
                                   "thinning = 3\nburn_in = 7\nseed = 11\nsector = 2\n"
                                   "[sr]\ntau = 0.04\nshift_initial = 2\nwindow = 5\n"
                                   "[cv]\nlambda = 0.1\ncv_tol = 1e-3\nwarm_start = off\n"
                                   "[sweep]\nomega_min = 0.5\nomega_max = 1\nomega_step = 0.1\n"
                                   "eta = 0.2\nk = 1, 3,5\nblock_size = 2\n"
                                   "[oracle]\ncap = 500\n"
                                   "[compare]\nl2_tol = 0.1\n"
                                   "[output]\ndirectory = somewhere\ncheckpoint = psi.bin\n");
  EXPECT_FALSE(c.model.periodic);
  EXPECT_EQ(c.hidden_units(), 10);
  EXPECT_EQ(c.rbm_seed, 9u);
  EXPECT_EQ(c.sampling_mode, SamplingMode::kExact);
  EXPECT_EQ(c.sampler.sector, 2);
  EXPECT_EQ(c.sampler.burn_in, 7);
  EXPECT_DOUBLE_EQ(c.sr.learning_rate, 0.04);
  EXPECT_EQ(c.cv.sr.convergence_window, 5);
  EXPECT_FALSE(c.cv.warm_start);
  EXPECT_EQ(c.momenta(), (std::vector<int>{1, 3, 5}));
  EXPECT_EQ(c.oracle.cap, 500);
  EXPECT_DOUBLE_EQ(c.compare.l2_tolerance, 0.1);
  EXPECT_EQ(c.output_directory, std::filesystem::path("somewhere"));
  EXPECT_EQ(c.checkpoint_name, "psi.bin");
  EXPECT_EQ(c.sampling().mode, SamplingMode::kExact);
}

TEST(Config, RejectsUnknownMissingAndMalformedKeys) {
  EXPECT_EQ(error_of(kMinimal + "[sr]\nlearning_rate = 0.1\n"), "unknown config key: sr.learning_rate");
  EXPECT_EQ(error_of("[model]\nlength = 6\nj1 = 1\n"), "missing required config key: model.j2");
  EXPECT_EQ(error_of("[model]\nj1 = 1\nj2 = 0\n"), "missing required config key: model.length");
  EXPECT_EQ(error_of(kMinimal + "[sweep]\neta = fast\n"), "invalid value 'fast' for config key sweep.eta");
  EXPECT_EQ(error_of(kMinimal + "[sampler]\nchains = 2.5\n"),
            "invalid value '2.5' for config key sampler.chains");
  EXPECT_EQ(error_of(kMinimal + "[rbm]\nseed = -1\n"), "invalid value '-1' for config key rbm.seed");
  EXPECT_NE(error_of(kMinimal + "[sampler]\nmode = quantum\n"), "");
  EXPECT_NE(error_of(kMinimal + "[sweep]\nk = 1,x\n"), "");
  EXPECT_NE(error_of("this is not ini ["), "");
  EXPECT_THROW(load_config("/nonexistent/run.ini"), ValidationError);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_NE(error_of(kMinimal + "[sweep]\nsource_site = 2\n"), "");
  EXPECT_NE(error_of(kMinimal + "[sweep]\neta = 0\n"), "");
  EXPECT_NE(error_of(kMinimal + "[sweep]\nomega_min = 2\nomega_max = 1\n"), "");
  EXPECT_NE(error_of(kMinimal + "[sweep]\nk = 6\n"), "");
  EXPECT_NE(error_of(kMinimal + "[sampler]\nsector = 1\n"), "");
  EXPECT_NE(error_of(kMinimal + "[sr]\ntau = -1\n"), "");
  EXPECT_NE(error_of(kMinimal + "[cv]\nlambda = 0\n"), "");
  EXPECT_NE(error_of("[model]\nlength = 4\nj1 = 1\nj2 = 0.5\n"), "");
  EXPECT_NE(error_of("[model]\nlength = 1\nj1 = 1\nj2 = 0\n"), "");
}

}  // namespace
}  // namespace nqsdyn
