#include <doctest.h>

#include "isynth/errors.hpp"
#include "isynth/scenario.hpp"

using namespace isynth;

TEST_CASE("partition files") {
  auto p = parse_partition_file("# comment\n.outputs: y1 y2\n.inputs: x1\n");
  CHECK(p.inputs == std::vector<std::string>{"x1"});
  CHECK(p.outputs == std::vector<std::string>{"y1", "y2"});
  auto q = parse_partition_file(".inputs:\n.outputs: go\n");
  CHECK(q.inputs.empty());
  CHECK_THROWS_AS(parse_partition_file(".inputs: x\n.inputs: z\n.outputs: y\n"), FormatError);
  CHECK_THROWS_AS(parse_partition_file("inputs x\n"), FormatError);
  CHECK_THROWS_AS(parse_partition_file(".outputs: y\n"), FormatError);

  Context ctx;
  auto part = make_partition(ctx, p);
  CHECK(ctx.vocab.name(part.agent[0]) == "y1");
  CHECK(part.agent[0] < part.env[0]);
  CHECK(part.vocabulary().size() == 3);
  Context ctx2;
  CHECK_THROWS_AS(make_partition(ctx2, PartitionNames{{"a"}, {"a"}}), Error);
  CHECK_THROWS_AS(make_partition(ctx2, PartitionNames{{"1x"}, {"b"}}), Error);
}

TEST_CASE("scenario files") {
  const std::string text =
      "scenario v1\n"
      "# a comment\n"
      "inputs x\n"
      "outputs y\n"
      "goal F y\n"
      "\n"
      "step x=1\n"
      "goal G(x -> N y)   # trailing\n";
  auto sc = parse_scenario(text);
  CHECK(sc.names.inputs == std::vector<std::string>{"x"});
  REQUIRE(sc.directives.size() == 3);
  CHECK(sc.directives[0].kind == Directive::Kind::Goal);
  CHECK(sc.directives[0].text == "F y");
  CHECK(sc.directives[0].line == 5);
  CHECK(sc.directives[1].kind == Directive::Kind::Step);
  CHECK(sc.directives[1].text == "x=1");
  CHECK(sc.directives[2].line == 8);

  CHECK_THROWS_AS(parse_scenario("scenario v2\n"), FormatError);
  CHECK_THROWS_AS(parse_scenario("scenario v1\noutputs y\ninputs x\n"), FormatError);
  CHECK_THROWS_AS(parse_scenario("scenario v1\ninputs x\noutputs y\nplay x=1\n"), FormatError);
  try {
    parse_scenario("scenario v1\ninputs x\noutputs y\ngoal F y\nbogus\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 5);
  }
}

TEST_CASE("assignments and trace literals") {
  Vocabulary v;
  const AtomId x1 = v.intern("x1"), x2 = v.intern("x2");
  const std::vector<AtomId> env{x1, x2};
  CHECK(parse_assignment("x1=1 x2=0", v, env) == Assignment{x1});
  CHECK(parse_assignment("x2=1  x1=1", v, env) == Assignment{x1, x2});
  CHECK_THROWS_AS(parse_assignment("x1=1", v, env), FormatError);
  CHECK_THROWS_AS(parse_assignment("x1=1 x2=2", v, env), FormatError);
  CHECK_THROWS_AS(parse_assignment("x1=1 x2=0 x1=0", v, env), FormatError);
  CHECK_THROWS_AS(parse_assignment("x1=1 x3=0", v, env), FormatError);
  CHECK_THROWS_AS(parse_assignment("x1 x2", v, env), FormatError);
  CHECK(parse_assignment("", v, {}) == Assignment{});

  CHECK(parse_trace_literal("{x1,x2},{},{x2}", v) == Trace{{x1, x2}, {}, {x2}});
  CHECK(parse_trace_literal("x1=1 x2=0;x2=1", v) == Trace{{x1}, {x2}});
  CHECK(parse_trace_literal("{}", v) == Trace{{}});
  CHECK(parse_trace_literal("", v).empty());
  const auto before = v.size();
  parse_trace_literal("{fresh}", v);
  CHECK(v.size() == before + 1);
  CHECK_THROWS_AS(parse_trace_literal("{x1", v), FormatError);
}
