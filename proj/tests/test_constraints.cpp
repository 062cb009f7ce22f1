#include <doctest.h>

#include <algorithm>
#include <random>

#include "sdnv/constraints.hpp"
#include "sdnv/errors.hpp"
#include "sdnv/patterns.hpp"
#include "sdnv/solver.hpp"
#include "support.hpp"

using namespace sdnv;
using namespace sdnv::test;

namespace {

std::vector<std::string> lines(const std::vector<Atom>& atoms)
{
    std::vector<std::string> out;
    for (const auto& a : atoms)
        out.push_back(a.str());
    return out;
}

bool contains(const std::vector<Atom>& atoms, const std::string& s)
{
    auto l = lines(atoms);
    return std::find(l.begin(), l.end(), s) != l.end();
}

ActivationPattern P(const char* text) { return ActivationPattern::parse(text); }

} // namespace

TEST_CASE("input constraints")
{
    auto c = input_constraints(t1_model());
    CHECK(lines(c.conjuncts())
          == std::vector<std::string>{"1*x_0 + 0 >= 0", "1*x_0 + -1 <= 0", "1*x_1 + 0 >= 0", "1*x_1 + -1 <= 0"});
    SdnModel one({1, 2, 1}, {affine(2, 1, {1, 1}, {0, 0}), affine(1, 2, {1, 1}, {0})}, 2, Rational(2));
    CHECK(input_constraints(one).conjuncts().size() == 2);
    std::mt19937_64 rng(1);
    CHECK(input_constraints(random_model(rng, {784, 5, 2}, 5)).conjuncts().size() == 1568);
}

TEST_CASE("activation-pattern constraints")
{
    SdnModel m = t1_model();
    CHECK(ap_constraints(m, P("A0I1")).dump()
          == "vars: _h_1_0 _h_1_1 _h_1_2 _h_1_3\n"
             "1*_h_1_0 + 0 > 0\n1*_h_1_1 + 0 > 0\n1*_h_1_2 + 0 < 0\n1*_h_1_3 + 0 < 0\n");
    CHECK(ap_constraints(m, P("A2I2")).conjuncts().empty());
    CHECK(lines(ap_constraints(m, P("A2I0")).conjuncts())
          == std::vector<std::string>{"1*_h_1_0 + 0 < 0", "1*_h_1_1 + 0 < 0"});
    CHECK_THROWS_AS(ap_constraints(m, P("A1I1")), InvariantError);
}

TEST_CASE("forward constraints")
{
    SdnModel m = t1_model();
    auto f = forward_constraints(m, P("A0I1")).conjuncts();
    CHECK(f.size() == 10);
    CHECK(std::all_of(f.begin(), f.end(), [](const Atom& a) { return a.rel == Relation::Eq; }));
    CHECK(contains(f, "-2*_h_1_0 + 1*h_1_0 + 0 = 0"));
    CHECK(contains(f, "1*h_1_2 + 0 = 0"));
    CHECK(contains(f, "-1*h_1_0 + -1*h_1_1 + 1*y_0 + 0 = 0"));
    CHECK(contains(f, "1*x_0 + 1*_h_1_2 + 0 = 0"));

    auto t = forward_constraints(m, P("A2I2")).conjuncts();
    CHECK(t.size() == 10);
    for (int j = 0; j < 4; ++j)
        CHECK(contains(t, "-1*_h_1_" + std::to_string(j) + " + 1*h_1_" + std::to_string(j) + " + 0 = 0"));
}

TEST_CASE("boundary constraints")
{
    std::mt19937_64 rng(2);
    SdnModel k3 = random_model(rng, {2, 2, 3}, 2);
    CHECK(lines(boundary_constraints(k3, 0, 1).conjuncts())
          == std::vector<std::string>{"1*y_0 + -1*y_1 + 0 = 0", "1*y_0 + -1*y_2 + 0 >= 0"});
    SdnModel m = t1_model();
    CHECK(lines(boundary_constraints(m, 0, 1).conjuncts()) == std::vector<std::string>{"1*y_0 + -1*y_1 + 0 = 0"});
    CHECK(lines(boundary_constraints(m, 0, 1, Rational(1, 100)).conjuncts())
          == std::vector<std::string>{"1*y_0 + -1*y_1 + 1/100 = 0"});
    CHECK_THROWS_AS(boundary_constraints(m, 1, 1), InvariantError);
    CHECK_THROWS_AS(boundary_constraints(m, 0, 2), ShapeError);
    CHECK_THROWS_AS(boundary_constraints(m, 0, 1, Rational(-1)), InvariantError);
}

TEST_CASE("meaningful constraints")
{
    auto c = meaningful_constraints(Qs({"1/2"}), Rational(1, 5));
    CHECK(lines(c.conjuncts()) == std::vector<std::string>{"1*x_0 + -7/10 < 0", "-1*x_0 + 3/10 < 0"});
    auto loose = meaningful_constraints(Qs({"1/2"}), Rational(1, 5), false);
    CHECK(lines(loose.conjuncts()) == std::vector<std::string>{"1*x_0 + -7/10 <= 0", "-1*x_0 + 3/10 <= 0"});
    CHECK_THROWS_AS(meaningful_constraints(Qs({"1/2"}), Rational(0)), InvariantError);

    // Box of side 2/5 around P.
    auto box = meaningful_constraints(Qs({"1/2", "1/2"}), Rational(1, 5));
    Assignment inside{{VarId::input(0), Q("0.69")}, {VarId::input(1), Q("0.31")}};
    Assignment edge{{VarId::input(0), Q("0.7")}, {VarId::input(1), Q("0.5")}};
    CHECK(check_assignment(box, inside));
    CHECK_FALSE(check_assignment(box, edge));

    // A corner prototype's box is cut down by the input domain.
    SdnModel m = t1_model();
    auto in = input_constraints(m);
    auto corner = meaningful_constraints(Qs({"0", "0"}), Rational(1, 5));
    auto both = conjoin({&in, &corner});
    CHECK(check_assignment(both, {{VarId::input(0), Q("0.1")}, {VarId::input(1), Q("0")}}));
    CHECK_FALSE(check_assignment(both, {{VarId::input(0), Q("-0.1")}, {VarId::input(1), Q("0")}}));
}

TEST_CASE("negate_region")
{
    auto a = VarId::pre_hidden(1, 0), b = VarId::pre_hidden(1, 1);
    ConstraintSystem one;
    one.add({LinearExpr::var(a), Relation::Gt});
    CHECK(lines(negate_region(one)) == std::vector<std::string>{"1*_h_1_0 + 0 <= 0"});

    ConstraintSystem two;
    two.add({LinearExpr::var(a), Relation::Gt});
    two.add({LinearExpr::var(b), Relation::Lt});
    CHECK(lines(negate_region(two)) == std::vector<std::string>{"1*_h_1_0 + 0 <= 0", "1*_h_1_1 + 0 >= 0"});

    CHECK(negate_region(ConstraintSystem{}).empty());

    ConstraintSystem nested;
    nested.add_clause({{LinearExpr::var(a), Relation::Gt}});
    CHECK_THROWS_AS(negate_region(nested), InvariantError);

    ConstraintSystem eq;
    eq.add({LinearExpr::var(a), Relation::Eq});
    CHECK_THROWS_AS(negate_region(eq), InvariantError);
}

TEST_CASE("negated region holds exactly where the region fails")
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> rel(1, 4), size(1, 4);
    for (int i = 0; i < 200; ++i) {
        ConstraintSystem s;
        for (int a = size(rng); a > 0; --a) {
            LinearExpr e(small_rational(rng));
            e.add_term(VarId::input(0), small_rational(rng));
            e.add_term(VarId::input(1), small_rational(rng));
            s.add({e, static_cast<Relation>(rel(rng))});
        }
        ConstraintSystem clause;
        clause.add_clause(negate_region(s));
        for (int j = 0; j < 30; ++j) {
            Assignment env{{VarId::input(0), small_rational(rng)}, {VarId::input(1), small_rational(rng)}};
            CHECK(check_assignment(clause, env) == !check_assignment(s, env));
        }
    }
}

TEST_CASE("conjoin")
{
    SdnModel m = t1_model();
    auto in = input_constraints(m);
    ConstraintSystem empty;
    CHECK(conjoin({&empty, &in}).dump() == in.dump());

    auto ap = ap_constraints(m, P("A0I1"));
    auto fw = forward_constraints(m, P("A0I1"));
    auto bd = boundary_constraints(m, 0, 1);
    auto mf = meaningful_constraints(Qs({"1/2", "1/2"}), Rational(1, 5));
    auto all = conjoin({&in, &ap, &fw, &bd, &mf});
    CHECK(all.conjuncts().size() == 4 + 4 + 10 + 1 + 4);
    CHECK(all.variables().size() == 12);

    auto left = conjoin({&in, &ap});
    auto right = conjoin({&ap, &fw});
    CHECK(conjoin({&left, &fw}).dump() == conjoin({&in, &right}).dump());
}

TEST_CASE("traces satisfy their own region and forward constraints")
{
    std::mt19937_64 rng(6);
    int checked = 0;
    for (int mi = 0; mi < 10; ++mi) {
        SdnModel m = random_model(rng, {3, 4, 6, 2}, 2);
        auto in = input_constraints(m);
        for (int i = 0; i < 100; ++i) {
            auto t = forward(m, random_input(rng, 3));
            if (t.degenerate)
                continue;
            auto ap = ap_constraints(m, t.pattern);
            auto fw = forward_constraints(m, t.pattern);
            CHECK(check_assignment(conjoin({&in, &ap, &fw}), trace_assignment(t)));
            ++checked;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("contradicting doors are rejected by the trace")
{
    SdnModel m = t1_model();
    auto t = forward(m, Qs({"1/2", "1/4"}));
    for (const auto& p : enumerate_patterns(m)) {
        auto ap = ap_constraints(m, p);
        bool named_ok = check_assignment(ap, trace_assignment(t));
        // Only doors compatible with the signs (+, +, -, -) can hold.
        bool expect = (p.layers[0].act == 0 || p.layers[0].act == 2) && (p.layers[0].ina == 1 || p.layers[0].ina == 2);
        CHECK(named_ok == expect);
    }
}
