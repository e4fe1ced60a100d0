#include <gtest/gtest.h>

#include "visco/config.hpp"
#include "visco/errors.hpp"

using namespace visco;

TEST(ParseConfig, MinimalDocumentGetsDefaults) {
  const RunSpec s = parse_config("command = simulate\nviscosity = z0doubleprime\n");
  EXPECT_EQ(s.command, Command::Simulate);
  EXPECT_EQ(s.dim, 2);
  EXPECT_EQ(s.cells, 32);
  EXPECT_EQ(s.model.energy.kind, EnergyModel::Kind::W0);
  EXPECT_EQ(s.model.viscosity.kind, ViscosityModel::Kind::Z0DoublePrime);
  EXPECT_DOUBLE_EQ(s.solver.p_norm, 5.0);
  EXPECT_EQ(s.initial, InitialPreset::Rest);
  EXPECT_EQ(s.fixture, Fixture::None);
  EXPECT_EQ(s.f0, Matrix::identity(2));
}

TEST(ParseConfig, CommentsWhitespaceAndCase) {
  const RunSpec s = parse_config(
      "# run\n\n  command=korn   # trailing\nVISCOSITY = Zm\nm = 2\ndim = 3\nf0 = 1,0,0; 0,2,0; 0,0,0.5\n");
  EXPECT_EQ(s.command, Command::Korn);
  EXPECT_EQ(s.model.viscosity, ViscosityModel::zm(2));
  EXPECT_EQ(s.f0, Matrix::diagonal({1.0, 2.0, 0.5}));
  EXPECT_DOUBLE_EQ(s.solver.p_norm, 6.0);
}

TEST(ParseConfig, RangeErrors) {
  EXPECT_THROW(parse_config("command = simulate\ndim = 2\np_norm = 2\n"), RangeError);
  EXPECT_THROW(parse_config("command = simulate\ncells = 3\n"), RangeError);
  EXPECT_THROW(parse_config("command = simulate\ndim = 3\n"), RangeError);
  EXPECT_THROW(parse_config("command = simulate\ndt = -1\n"), RangeError);
  EXPECT_THROW(parse_config("command = simulate\nenergy = w1\nq = 1\n"), RangeError);
  EXPECT_THROW(parse_config("command = korn\nf0 = 1,0;0,1\ndim = 3\n"), RangeError);
  try {
    parse_config("command = simulate\ndet_floor = 2\n");
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("det_floor"), std::string::npos);
  }
}

TEST(ParseConfig, GrammarErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("command = simulate\ncells = 8\ncells = 16\n"), 3);
  EXPECT_EQ(line_of("command = simulate\nbogus = 1\n"), 2);
  EXPECT_EQ(line_of("command = simulate\n\njust words\n"), 3);
  EXPECT_EQ(line_of("command = simulate\ncells = 8x\n"), 2);
  EXPECT_EQ(line_of("command = simulate\ninitial = explode\n"), 2);
  EXPECT_EQ(line_of("command = convergence\nlevels = 1\n"), 2);
  EXPECT_EQ(line_of("cells = 8\n"), 0);
  EXPECT_EQ(line_of("command = simulate\nf0 = 1,2;3\n"), 2);
}

TEST(ParseConfig, ConvergenceDefaultsDependOnDimension) {
  const RunSpec one = parse_config("command = convergence\n");
  EXPECT_EQ(one.dim, 1);
  EXPECT_EQ(one.levels, 4);
  const RunSpec two = parse_config("command = convergence\ndim = 2\n");
  EXPECT_EQ(two.levels, 3);
  EXPECT_EQ(two.conv_fine_cells, 32);
}

TEST(SerializeConfig, RoundTrips) {
  const char* docs[] = {
      "command = simulate\n",
      "command = korn\ndim = 3\nviscosity = zm\nm = 1\nq0 = 0.1,0.2,0.3;1,2,3;-1,0.5,0.25\nseed = 42\n",
      "command = check\nenergy = w2\nq = 2.5\ninitial = sinusoidal\namplitude = 0.123456789\nmode = 3\n",
      "command = convergence\nfixture = broken_stencil\nlevels = 2\nconv_fine_dt = 3e-5\noutput_dir = some dir/x\n",
  };
  for (const char* d : docs) {
    const RunSpec s = parse_config(d);
    const std::string text = serialize_config(s);
    EXPECT_EQ(parse_config(text), s) << text;
    EXPECT_EQ(serialize_config(parse_config(text)), text);
  }
}

TEST(InitialData, PresetsRespectClamping) {
  for (InitialPreset p : {InitialPreset::Rest, InitialPreset::Sinusoidal, InitialPreset::Compression,
                          InitialPreset::Reflected}) {
    for (int n = 1; n <= 2; ++n) {
      RunSpec s;
      s.dim = n;
      s.initial = p;
      const auto [xi0, xi1] = initial_data(s);
      for (double x : {0.0, 1.0}) {
        Vector pt(n);
        pt[0] = x;
        if (n == 2) pt[1] = 0.37;
        EXPECT_NEAR(norm(xi0(pt) - pt), 0.0, 1e-12) << to_string(p);
        EXPECT_NEAR(norm(xi1(pt)), 0.0, 1e-12) << to_string(p);
      }
    }
  }
}
