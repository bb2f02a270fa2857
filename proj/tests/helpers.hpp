#pragma once

// Shared test scaffolding: fixture paths, file slurping, the case-study
// trees, and an error-code catcher.

#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include <bowtie/bowtie.hpp>

namespace testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(BOWTIE_FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string slurp_fixture(const std::string& name) {
  return slurp(fixture_path(name));
}

/// Runs `f`, requiring it to throw a library error, and hands back the code.
template <typename F>
bowtie::errc code_of(F&& f) {
  try {
    f();
  } catch (const bowtie::error& e) {
    return e.code();
  }
  FAIL("expected the call to throw bowtie::error");
  return bowtie::errc::empty_tree;  // unreachable
}

// The security scenario: two privilege-escalation routes.
inline bowtie::prevention_tree dpt_a() {
  return bowtie::as_prevention_tree(bowtie::to_tree(
      bowtie::parse(slurp_fixture("dpt_a.dsl"))));
}

// The safety scenario: two inhibited operator actions.
inline bowtie::prevention_tree dpt_s() {
  return bowtie::as_prevention_tree(bowtie::to_tree(
      bowtie::parse(slurp_fixture("dpt_s.dsl"))));
}

// The joint response split.
inline bowtie::consequence_tree fb_dct() {
  return bowtie::as_consequence_tree(bowtie::to_tree(
      bowtie::parse(slurp_fixture("fb_dct.dsl"))));
}

inline bowtie::disruption_bowtie fb_bowtie() {
  return bowtie::make_bowtie(bowtie::independent_join(dpt_a(), dpt_s()),
                             fb_dct(), "server outage");
}

}  // namespace testing
