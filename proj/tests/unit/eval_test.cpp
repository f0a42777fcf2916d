#include <gtest/gtest.h>

#include <random>

#include "adme/eval/check.hpp"
#include "fixtures.hpp"

using namespace adme;
using fixtures::id;
using model::Channel;
using model::Configuration;
using model::PortSlot;

namespace {

const lang::ConstraintSet& randc(const lang::SpecDocument& doc) { return *doc.find_constraintset("randc"); }

Channel channel(const std::string& src, const std::string& dst) {
    return {PortSlot::parse(src), PortSlot::parse(dst)};
}

// Two routers on h1/h2, no channels.
Configuration router_pair(const lang::SpecDocument& doc) {
    Configuration c;
    c.hosts = {doc.hosts[0], doc.hosts[1]};
    c.instances = {{{"Router", "h1", 0}, "r"}, {{"Router", "h2", 0}, "r"}};
    return c;
}

}  // namespace

TEST(Check, BaselineSatisfiesRandc) {
    auto doc = fixtures::sample_doc();
    auto r = eval::check(fixtures::baseline(doc), randc(doc), doc);
    EXPECT_TRUE(r.satisfied);
    EXPECT_TRUE(r.violations.empty());
}

TEST(Check, EmptyHostsViolateFirstClause) {
    auto doc = fixtures::sample_doc();
    Configuration c;
    c.hosts = doc.hosts;
    auto r = eval::check(c, randc(doc), doc);
    EXPECT_FALSE(r.satisfied);
    ASSERT_FALSE(r.violations.empty());
    EXPECT_EQ(r.violations[0].constraint, 0u);
    EXPECT_EQ(eval::to_string(r.violations[0].witness), "h=h1");
}

TEST(Check, ThirdClientOnOneRouter) {
    auto doc = fixtures::sample_doc();
    auto c = fixtures::baseline(doc);
    // move Client@h6 from Router@h4 to Router@h3
    std::vector<model::PortLink> links = {
        {id("Client@h1#0"), "out", id("Router@h3#0"), "cin"}, {id("Client@h1#0"), "in", id("Router@h3#0"), "cout"},
        {id("Client@h5#0"), "out", id("Router@h3#0"), "cin"}, {id("Client@h5#0"), "in", id("Router@h3#0"), "cout"},
        {id("Client@h6#0"), "out", id("Router@h3#0"), "cin"}, {id("Client@h6#0"), "in", id("Router@h3#0"), "cout"},
        {id("Client@h2#0"), "out", id("Router@h4#0"), "cin"}, {id("Client@h2#0"), "in", id("Router@h4#0"), "cout"},
        {id("Router@h3#0"), "rout", id("Router@h4#0"), "rin"}, {id("Router@h4#0"), "rout", id("Router@h3#0"), "rin"},
    };
    c.channels = model::materialize(links, c, doc);
    ASSERT_TRUE(model::validate(c, doc).empty());
    auto r = eval::check(c, randc(doc), doc);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].constraint, 2u);
    EXPECT_EQ(eval::to_string(r.violations[0].witness), "r=Router@h3#0");
}

TEST(Check, WitnessDescendsNestedForall) {
    auto doc = fixtures::sample_doc();
    auto c = fixtures::baseline(doc);
    std::erase_if(c.channels, [](const Channel& ch) { return ch.src.instance.str() == "Router@h4#0"; });
    auto r = eval::check(c, randc(doc), doc);
    // clause 4 fails for h3 (no partner rin<-rout), clause 5 for (r1=h4, r2=h3)
    ASSERT_EQ(r.violations.size(), 2u);
    EXPECT_EQ(r.violations[0].constraint, 3u);
    EXPECT_EQ(eval::to_string(r.violations[0].witness), "r1=Router@h3#0");
    EXPECT_EQ(r.violations[1].constraint, 4u);
    EXPECT_EQ(eval::to_string(r.violations[1].witness), "r1=Router@h4#0, r2=Router@h3#0");
}

TEST(Check, OrderingOnInstanceIsTypeError) {
    auto doc = fixtures::sample_doc();
    lang::ConstraintSet cs;
    lang::Quantified q{lang::Quantifier::Forall, {{"Router", "r"}},
                       lang::ConstraintExpr{lang::Compare{lang::VarRef{"r"}, lang::CompareOp::Lt, lang::IntLiteral{2}}}};
    cs.constraints.push_back({q});
    EXPECT_THROW(eval::check(fixtures::baseline(doc), cs, doc), eval::TypeError);
}

TEST(Check, EmptyConstraintSetIsVacuous) {
    auto doc = fixtures::sample_doc();
    EXPECT_TRUE(eval::check(Configuration{}, lang::ConstraintSet{}, doc).satisfied);
}

TEST(Reachable, Basics) {
    auto doc = fixtures::sample_doc();
    auto c = router_pair(doc);
    EXPECT_TRUE(eval::reachable(c, id("Router@h1#0"), id("Router@h1#0")));
    EXPECT_FALSE(eval::reachable(c, id("Router@h1#0"), id("Router@h2#0")));
    c.channels = {channel("Router@h1#0:rout[0]", "Router@h2#0:rin[0]")};
    EXPECT_TRUE(eval::reachable(c, id("Router@h1#0"), id("Router@h2#0")));
    EXPECT_FALSE(eval::reachable(c, id("Router@h2#0"), id("Router@h1#0")));
    c.channels.push_back(channel("Router@h2#0:rout[0]", "Router@h1#0:rin[0]"));
    EXPECT_TRUE(eval::reachable(c, id("Router@h2#0"), id("Router@h1#0")));
    EXPECT_THROW(eval::reachable(c, id("Router@h9#0"), id("Router@h1#0")), eval::UnknownInstance);
}

TEST(ConnectedInstances, Examples) {
    auto doc = fixtures::sample_doc();
    auto c = fixtures::baseline(doc);
    EXPECT_EQ(eval::connected_instances(c, id("Router@h3#0")),
              (std::set<model::InstanceId>{id("Client@h1#0"), id("Client@h5#0"), id("Router@h4#0")}));
    EXPECT_EQ(eval::connected_instances(c, id("Client@h1#0")), (std::set<model::InstanceId>{id("Router@h3#0")}));
    auto lone = router_pair(doc);
    EXPECT_TRUE(eval::connected_instances(lone, id("Router@h1#0")).empty());
    EXPECT_THROW(eval::connected_instances(lone, id("Client@h1#0")), eval::UnknownInstance);
}

// ---- properties

namespace {

// n routers on one host; each edge (u, v) becomes rout -> rin.
Configuration digraph(const lang::SpecDocument& doc, int n, const std::vector<std::pair<int, int>>& edges) {
    Configuration c;
    c.hosts = {doc.hosts[0]};
    for (int i = 0; i < n; ++i) c.instances.push_back({{"Router", "h1", unsigned(i)}, "r"});
    std::vector<model::PortLink> links;
    for (auto [u, v] : edges)
        links.push_back({{"Router", "h1", unsigned(u)}, "rout", {"Router", "h1", unsigned(v)}, "rin"});
    c.channels = model::materialize(links, c, doc);
    return c;
}

}  // namespace

TEST(ReachableProperty, MatchesTransitiveClosure) {
    auto doc = fixtures::sample_doc();
    std::mt19937 rng(5);
    for (int g = 0; g < 250; ++g) {
        int n = std::uniform_int_distribution<int>(1, 8)(rng);
        std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
        std::vector<std::pair<int, int>> edges;
        std::bernoulli_distribution coin(0.2);
        for (int u = 0; u < n; ++u) {
            m[u][u] = true;
            for (int v = 0; v < n; ++v) {
                if (u != v && coin(rng)) {
                    m[u][v] = true;
                    edges.push_back({u, v});
                }
            }
        }
        // Warshall
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (m[i][k] && m[k][j]) m[i][j] = true;
        auto c = digraph(doc, n, edges);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                ASSERT_EQ(eval::reachable(c, {"Router", "h1", unsigned(i)}, {"Router", "h1", unsigned(j)}), m[i][j]);
    }
}

TEST(CheckProperty, ConnectsToIsMonotone) {
    // Built only from connectsto, and/or and quantifiers, so a satisfied
    // constraint can only turn false if some connectsto leaf does.
    auto doc = lang::parse(fixtures::data("resources.deladas") +
                           "constraintset s = constraintset {\n"
                           "  forall Router a in deployment ( exists Router b in deployment ( a.rout connectsto b.rin ) )\n"
                           "  exists Router a, b in deployment ( a.rin connectsto b.rout b.rout connectsto a.rin )\n"
                           "  forall Router a, b in deployment ( a = b or a.rout connectsto b.rin or b.rout connectsto a.rin )\n"
                           "  exists Router a in deployment ( forall Router b in deployment ( a = b or a.rout connectsto b.rin ) )\n"
                           "}\n");
    const auto& cs = *doc.find_constraintset("s");
    std::mt19937 rng(8);
    int flips = 0;
    for (int g = 0; g < 200; ++g) {
        int n = std::uniform_int_distribution<int>(2, 5)(rng);
        std::vector<std::pair<int, int>> all, edges;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v) all.push_back({u, v});
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<bool> before(cs.constraints.size(), false);
        for (const auto& e : all) {
            edges.push_back(e);
            auto r = eval::check(digraph(doc, n, edges), cs, doc);
            std::vector<bool> now(cs.constraints.size(), true);
            for (const auto& v : r.violations) now[v.constraint] = false;
            for (std::size_t i = 0; i < now.size(); ++i) {
                ASSERT_TRUE(!before[i] || now[i]) << "constraint " << i << " lost after adding a channel";
                flips += !before[i] && now[i];
            }
            before = now;
        }
    }
    EXPECT_GT(flips, 200);
}

namespace {

// Direct evaluation of `exists r1, r2 ( not reachable(r1, r2) )` by enumeration.
bool some_pair_unreachable(const Configuration& c) {
    for (const auto& a : c.instances)
        for (const auto& b : c.instances)
            if (!eval::reachable(c, a.id, b.id)) return true;
    return false;
}

}  // namespace

TEST(CheckProperty, ForallViolationMatchesNegatedExists) {
    auto doc = fixtures::sample_doc();
    const auto& cs = randc(doc);
    std::mt19937 rng(21);
    for (int g = 0; g < 200; ++g) {
        int n = std::uniform_int_distribution<int>(1, 5)(rng);
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v && std::bernoulli_distribution(0.35)(rng)) edges.push_back({u, v});
        auto c = digraph(doc, n, edges);
        auto r = eval::check(c, cs, doc);
        bool clause5 = std::any_of(r.violations.begin(), r.violations.end(),
                                   [](const auto& v) { return v.constraint == 4; });
        ASSERT_EQ(clause5, some_pair_unreachable(c));
        auto again = eval::check(c, cs, doc);
        ASSERT_EQ(again.violations, r.violations);
    }
}
