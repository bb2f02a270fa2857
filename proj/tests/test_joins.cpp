// The four interdependency joins and the end-to-end bowtie reading.

#include <algorithm>

#include "helpers.hpp"

using namespace bowtie;
using testing::code_of;

namespace {

prevention_tree dpt(const std::string& src) {
  return as_prevention_tree(to_tree(parse(src)));
}

consequence_tree dct(const std::string& src) {
  return as_consequence_tree(to_tree(parse(src)));
}

std::vector<std::string> labels_of(const structure_tree& t,
                                   const std::vector<node_id>& ids) {
  std::vector<std::string> out;
  for (node_id id : ids) out.push_back(t.label(id));
  return out;
}

}  // namespace

// --- independent -----------------------------------------------------------

TEST_CASE("independent join puts a fresh OR over both roots", "[joins]") {
  prevention_tree joined = independent_join(dpt("x"), dpt("y"));
  const structure_tree& t = joined.tree();
  CHECK(t.size() == 3);
  CHECK(t.kind(t.root()) == node_kind::or_gate);
  REQUIRE(t.children(t.root()).size() == 2);
  CHECK(t.label(t.children(t.root())[0].child) == "x");
  CHECK(t.label(t.children(t.root())[1].child) == "y");
}

TEST_CASE("independent join keeps argument order", "[joins][case-study]") {
  prevention_tree joined = independent_join(testing::dpt_a(), testing::dpt_s());
  const structure_tree& t = joined.tree();
  CHECK(t.size() == 17);
  REQUIRE(t.children(t.root()).size() == 2);
  CHECK(t.kind(t.children(t.root())[0].child) == node_kind::or_gate);
  CHECK(t.kind(t.children(t.root())[1].child) == node_kind::and_gate);
}

TEST_CASE("the joined case study matches its closed-form expression",
          "[joins][case-study]") {
  prevention_tree joined = independent_join(testing::dpt_a(), testing::dpt_s());
  structure_tree expected = to_tree(
      parse("(((ftp & rsh) & \"buffer overflow\") | (rsa & ssh))"
            " | (inhibit(\"server patch\", \"update check\")"
            " & inhibit(\"resolve DNS\", \"dns check\"))"));
  CHECK(structurally_equal(joined.tree(), expected));
}

TEST_CASE("independent join is the pointwise OR of its parts",
          "[joins][case-study]") {
  prevention_tree a = testing::dpt_a();
  prevention_tree s = testing::dpt_s();
  prevention_tree joined = independent_join(a, s);

  std::vector<std::string> all = leaf_labels(joined.tree());
  REQUIRE(all.size() == 9);
  std::set<std::string> a_leaves, s_leaves;
  for (const std::string& l : leaf_labels(a.tree())) a_leaves.insert(l);
  for (const std::string& l : leaf_labels(s.tree())) s_leaves.insert(l);

  for (std::uint64_t bits = 0; bits < (1u << 9); ++bits) {
    activation_set act, act_a, act_s;
    for (std::size_t i = 0; i < 9; ++i) {
      if (!(bits & (1u << i))) continue;
      act.insert(all[i]);
      if (a_leaves.count(all[i])) act_a.insert(all[i]);
      if (s_leaves.count(all[i])) act_s.insert(all[i]);
    }
    bool expected = evaluate(a, act_a) || evaluate(s, act_s);
    INFO("bits=" << bits);
    REQUIRE(evaluate(joined, act) == expected);
  }
}

TEST_CASE("independent join needs disjoint leaf vocabularies", "[joins][errors]") {
  CHECK(code_of([] { independent_join(dpt("x & y"), dpt("x")); }) ==
        errc::duplicate_leaf_label);
}

// --- conditional ------------------------------------------------------------

TEST_CASE("conditional join expands a leaf into the guest tree", "[joins]") {
  prevention_tree joined = conditional_join(dpt("x | y"), dpt("p & q"), "x");
  CHECK(structurally_equal(joined.tree(), to_tree(parse("(p & q) | y"))));
  // The guest root takes the leaf's position among its parent's children.
  CHECK(joined.tree().kind(joined.tree().children(joined.tree().root())[0].child) ==
        node_kind::and_gate);
}

TEST_CASE("the conditional case study matches its closed form",
          "[joins][case-study]") {
  prevention_tree joined =
      conditional_join(testing::dpt_s(), dpt("rsa & ssh"), "resolve DNS");
  structure_tree expected = to_tree(
      parse("inhibit(\"server patch\", \"update check\")"
            " & inhibit(rsa & ssh, \"dns check\")"));
  CHECK(structurally_equal(joined.tree(), expected));
  CHECK(joined.tree().size() == 9);
}

TEST_CASE("conditional join reports bad targets", "[joins][errors]") {
  CHECK(code_of([] { conditional_join(dpt("x | y"), dpt("p"), "nope"); }) ==
        errc::unknown_label);
  // Gate labels name nodes but not leaves.
  CHECK(code_of([] { conditional_join(dpt("x & y"), dpt("p"), "AND"); }) ==
        errc::not_a_leaf);
}

TEST_CASE("conditional join rejects leaf collisions except the target",
          "[joins][errors]") {
  CHECK(code_of([] { conditional_join(dpt("x | y"), dpt("y & q"), "x"); }) ==
        errc::label_collision);
  // The target's own label may reappear inside the guest.  Ids keep the
  // host-then-guest order, so the surviving host leaf comes first.
  prevention_tree joined = conditional_join(dpt("x | y"), dpt("x & q"), "x");
  CHECK(leaf_labels(joined.tree()) ==
        std::vector<std::string>{"y", "x", "q"});
}

TEST_CASE("expanding a single-leaf host yields the guest", "[joins]") {
  prevention_tree joined = conditional_join(dpt("x"), dpt("p & q"), "x");
  CHECK(structurally_equal(joined.tree(), to_tree(parse("p & q"))));
}

TEST_CASE("a shared target leaf rewires every incoming edge", "[joins]") {
  // x feeds two gates; both edges must point at the guest root afterwards.
  structure_tree host = build_tree(
      {{"or", node_kind::or_gate},
       {"and1", node_kind::and_gate},
       {"and2", node_kind::and_gate},
       {"x", node_kind::leaf},
       {"y", node_kind::leaf},
       {"z", node_kind::leaf}},
      {{"or", "and1"}, {"or", "and2"},
       {"and1", "x"}, {"and1", "y"},
       {"and2", "x"}, {"and2", "z"}});
  prevention_tree joined =
      conditional_join(as_prevention_tree(host), dpt("p & q"), "x");
  const structure_tree& t = joined.tree();
  CHECK(t.size() == 8);
  node_id and1 = t.children(t.root())[0].child;
  node_id and2 = t.children(t.root())[1].child;
  CHECK(t.children(and1)[0].child == t.children(and2)[0].child);
  CHECK(leaf_labels(t) == std::vector<std::string>{"y", "z", "p", "q"});
}

// --- reinforcing ------------------------------------------------------------

namespace {

// A response tree whose nodes carry meaningful labels at every level.
consequence_tree layered_dct() {
  return as_consequence_tree(build_tree(
      {{"resp", node_kind::choose},
       {"other", node_kind::leaf},
       {"j_i", node_kind::choose},
       {"j_n", node_kind::leaf},
       {"alt", node_kind::leaf}},
      {{"resp", "other"}, {"resp", "j_i"}, {"j_i", "j_n"}, {"j_i", "alt"}}));
}

node_id only_choose(const consequence_tree& t, const std::string& label) {
  for (node_id id : nodes_of_kind(t.tree(), node_kind::choose)) {
    if (t.tree().label(id) == label) return id;
  }
  FAIL("no choose node labelled " + label);
  return node_id(0);
}

}  // namespace

TEST_CASE("the reinforcing branch is the trace minus its root", "[joins]") {
  consequence_tree source = layered_dct();
  consequence_choice c{{only_choose(source, "resp"), 2},
                       {only_choose(source, "j_i"), 1}};
  CHECK(reinforcing_branch(source, c) ==
        std::vector<std::string>{"j_i", "j_n"});
}

TEST_CASE("a single-outcome tree is its own branch", "[joins]") {
  consequence_tree source = dct("choose{a, b}");
  CHECK(reinforcing_branch(source, {{source.tree().root(), 1}}) ==
        std::vector<std::string>{"a"});
  consequence_tree lone = as_consequence_tree(to_tree(parse("\"only outcome\"")));
  CHECK(reinforcing_branch(lone, {}) ==
        std::vector<std::string>{"only outcome"});
}

TEST_CASE("duplicate labels along the trace collapse", "[joins]") {
  // Two nested splits may share a label (only leaf labels are unique); the
  // branch keeps one copy so the replacement gate stays proper.
  structure_tree shape = [] {
    tree_builder b;
    node_id root = b.add_node("root", node_kind::choose);
    node_id skip = b.add_node("skip", node_kind::leaf);
    node_id outer = b.add_node("act", node_kind::choose);
    node_id inner = b.add_node("act", node_kind::choose);
    node_id done = b.add_node("done", node_kind::leaf);
    node_id undone = b.add_node("undone", node_kind::leaf);
    b.add_edge(root, skip);
    b.add_edge(root, outer);
    b.add_edge(outer, inner);
    b.add_edge(outer, undone);
    b.add_edge(inner, done);
    b.add_edge(inner, skip);
    return std::move(b).build();
  }();
  consequence_tree source = as_consequence_tree(std::move(shape));
  consequence_choice c{{node_id(0), 2}, {node_id(2), 1}, {node_id(3), 1}};
  CHECK(reinforcing_branch(source, c) ==
        std::vector<std::string>{"act", "done"});
}

TEST_CASE("bad choices surface as InvalidChoice", "[joins][errors]") {
  consequence_tree source = layered_dct();
  CHECK(code_of([&] { reinforcing_branch(source, {}); }) ==
        errc::invalid_choice);
  CHECK(code_of([&] {
          reinforcing_branch(source, {{source.tree().root(), 9}});
        }) == errc::invalid_choice);
}

TEST_CASE("reinforcing join swaps in the branch and prunes the rest",
          "[joins]") {
  disruption_bowtie source = make_bowtie(dpt("cause"), layered_dct(), "top");
  prevention_tree target = dpt("inhibit(X, Y)");
  consequence_choice c{{only_choose(source.consequence, "resp"), 2},
                       {only_choose(source.consequence, "j_i"), 1}};

  reinforcing_join_result r =
      reinforcing_join(source, target, target.tree().root(), c);
  CHECK(structurally_equal(r.tree.tree(), to_tree(parse("inhibit(X, j_i & j_n)"))));
  CHECK(r.pruned == std::vector<std::string>{"Y"});
  CHECK(r.tree.tree().kind(r.reinforced) == node_kind::inhibit);

  // The branch suppresses the cause: X fires the disruption unless both
  // branch events are active.
  for (std::uint64_t bits = 0; bits < 8; ++bits) {
    activation_set act;
    if (bits & 1) act.insert("X");
    if (bits & 2) act.insert("j_i");
    if (bits & 4) act.insert("j_n");
    bool expected = (bits & 1) && !((bits & 2) && (bits & 4));
    REQUIRE(evaluate(r.tree, act) == expected);
  }
}

TEST_CASE("a single-event branch becomes a bare leaf", "[joins][case-study]") {
  disruption_bowtie fb = testing::fb_bowtie();
  prevention_tree target = testing::dpt_s();
  std::vector<node_id> inhibits =
      nodes_of_kind(target.tree(), node_kind::inhibit);
  REQUIRE(inhibits.size() == 2);
  // Pick the INHIBIT guarding "server patch".
  node_id guard = inhibits[0];
  REQUIRE(target.tree().label(target.tree().children(guard)[0].child) ==
          "server patch");

  consequence_choice c{{fb.consequence.tree().root(), 2}};
  reinforcing_join_result r = reinforcing_join(fb, target, guard, c);
  CHECK(structurally_equal(
      r.tree.tree(),
      to_tree(parse("inhibit(\"server patch\", \"disable ssh\")"
                    " & inhibit(\"resolve DNS\", \"dns check\")"))));
  CHECK(r.pruned == std::vector<std::string>{"update check"});
}

TEST_CASE("branch events already in the target are shared, not duplicated",
          "[joins]") {
  disruption_bowtie source =
      make_bowtie(dpt("cause"), dct("choose{X, other}"), "top");
  prevention_tree target = dpt("X & inhibit(Z, Y)");
  node_id inhibit =
      nodes_of_kind(target.tree(), node_kind::inhibit).front();

  reinforcing_join_result r = reinforcing_join(
      source, target, inhibit, {{source.consequence.tree().root(), 1}});
  const structure_tree& t = r.tree.tree();
  CHECK(t.size() == 4);
  CHECK(r.pruned == std::vector<std::string>{"Y"});
  // AND's first child and INHIBIT's second child are one node.
  CHECK(t.children(t.root())[0].child == t.children(r.reinforced)[1].child);
}

TEST_CASE("a displaced subtree stays when something else still needs it",
          "[joins]") {
  structure_tree shape = build_tree(
      {{"and", node_kind::and_gate},
       {"inh", node_kind::inhibit},
       {"or", node_kind::or_gate},
       {"X", node_kind::leaf},
       {"Y", node_kind::leaf},
       {"Z", node_kind::leaf}},
      {{"and", "inh"}, {"and", "or"},
       {"inh", "X"}, {"inh", "Y"},
       {"or", "Y"}, {"or", "Z"}});
  prevention_tree target = as_prevention_tree(shape);
  disruption_bowtie source =
      make_bowtie(dpt("cause"), dct("choose{W, other}"), "top");
  node_id inhibit =
      nodes_of_kind(target.tree(), node_kind::inhibit).front();

  reinforcing_join_result r = reinforcing_join(
      source, target, inhibit, {{source.consequence.tree().root(), 1}});
  CHECK(r.pruned.empty());
  CHECK(r.tree.tree().size() == 7);
  CHECK(leaf_labels(r.tree.tree()) ==
        std::vector<std::string>{"X", "Y", "Z", "W"});
}

TEST_CASE("reinforcing join wants an INHIBIT gate", "[joins][errors]") {
  disruption_bowtie source =
      make_bowtie(dpt("cause"), dct("choose{a, b}"), "top");
  prevention_tree target = dpt("x & y");
  CHECK(code_of([&] {
          reinforcing_join(source, target, target.tree().root(),
                           {{source.consequence.tree().root(), 1}});
        }) == errc::not_inhibit);
  CHECK(code_of([&] {
          reinforcing_join(source, target, node_id(99),
                           {{source.consequence.tree().root(), 1}});
        }) == errc::not_inhibit);
}

// --- antagonistic -----------------------------------------------------------

TEST_CASE("antagonistic join splits on the event", "[joins]") {
  consequence_tree joined = antagonistic_join(
      dct("\"continue\""), dct("halt"), "patch");
  const structure_tree& t = joined.tree();
  CHECK(t.size() == 3);
  CHECK(t.kind(t.root()) == node_kind::choose);
  CHECK(t.label(t.root()) == "patch");
  REQUIRE(t.children(t.root()).size() == 2);
  CHECK(t.children(t.root())[0].tag == "patch-occurs");
  CHECK(t.children(t.root())[1].tag == "patch-not-occurs");
  CHECK(t.label(t.children(t.root())[0].child) == "continue");
  CHECK(t.label(t.children(t.root())[1].child) == "halt");
}

TEST_CASE("colliding outcomes of the second tree get primed", "[joins]") {
  consequence_tree joined = antagonistic_join(
      dct("choose{fix, monitor}"), dct("choose{fix, replace}"), "clash");
  std::vector<std::string> labels = leaf_labels(joined.tree());
  std::sort(labels.begin(), labels.end());
  CHECK(labels == std::vector<std::string>{"fix", "fix'", "monitor", "replace"});
}

TEST_CASE("priming repeats until the label is fresh", "[joins]") {
  consequence_tree joined = antagonistic_join(
      dct("choose{fix, \"fix'\"}"), dct("choose{fix, x}"), "clash");
  std::vector<std::string> labels = leaf_labels(joined.tree());
  std::sort(labels.begin(), labels.end());
  CHECK(labels == std::vector<std::string>{"fix", "fix'", "fix''", "x"});
}

TEST_CASE("a tree joined with itself is fully renamed", "[joins][case-study]") {
  consequence_tree joined =
      antagonistic_join(testing::fb_dct(), testing::fb_dct(), "conflict");
  const structure_tree& t = joined.tree();
  CHECK(t.size() == 7);
  std::vector<outcome> outs = enumerate_outcomes(joined);
  REQUIRE(outs.size() == 4);
  CHECK(labels_of(t, {outs[0].leaf, outs[1].leaf, outs[2].leaf, outs[3].leaf}) ==
        std::vector<std::string>{"remote login", "disable ssh",
                                 "remote login'", "disable ssh'"});
}

TEST_CASE("the antagonistic event needs a label", "[joins][errors]") {
  CHECK(code_of([] { antagonistic_join(dct("a"), dct("b"), ""); }) ==
        errc::empty_label);
}

// --- bowtie / end-to-end ----------------------------------------------------

TEST_CASE("a bowtie needs a top event", "[joins][errors]") {
  CHECK(code_of([] { make_bowtie(dpt("x"), dct("a"), ""); }) ==
        errc::empty_label);
}

TEST_CASE("end_to_end reads causes through to outcomes", "[joins][case-study]") {
  disruption_bowtie fb = testing::fb_bowtie();

  CHECK(end_to_end(fb, {}).empty());
  CHECK(end_to_end(fb, {"ftp"}).empty());

  std::vector<node_id> hit = end_to_end(fb, {"rsa", "ssh"});
  CHECK(labels_of(fb.consequence.tree(), hit) ==
        std::vector<std::string>{"remote login", "disable ssh"});

  CHECK(end_to_end(fb, {"ftp", "rsh", "buffer overflow"}) == hit);
}
