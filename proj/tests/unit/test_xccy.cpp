#include <doctest.h>

#include "cryptoyield/error.hpp"
#include "cryptoyield/xccy.hpp"

#include "generators.hpp"

#include <cmath>

using namespace cyield;
using namespace cyield::xccy;

namespace {

SwapTerms symmetric_terms() {
    SwapTerms t;
    t.notional_a = 100;
    t.initial_rate = 1;
    t.margin_a = 5;
    t.margin_b = 5;
    return t;
}

LedgerState funded() {
    LedgerState l;
    l.party_a = {1000, 50};
    l.party_b = {50, 1000};
    return l;
}

OracleTick tick(Timestamp t, Rational rate) { return OracleTick{t, std::move(rate)}; }

} // namespace

TEST_CASE("initiate") {
    SwapAgreement s(symmetric_terms(), funded());
    const auto alpha0 = s.ledger().total(Token::Alpha), beta0 = s.ledger().total(Token::Beta);
    s.initiate();
    CHECK(s.state() == SwapState::Active);
    CHECK(s.ledger().party_a.beta == 150);
    CHECK(s.ledger().party_b.alpha == 150);
    CHECK(s.ledger().contract.alpha == 5);
    CHECK(s.ledger().contract.beta == 5);
    CHECK(s.ledger().total(Token::Alpha) == alpha0);
    CHECK(s.ledger().total(Token::Beta) == beta0);
    CHECK_THROWS_AS(s.initiate(), StateError);

    auto small = symmetric_terms();
    small.margin_b = Rational(49, 10);
    SwapAgreement u(small, funded());
    CHECK_THROWS_AS(u.initiate(), DomainError);

    LedgerState poor;
    poor.party_a = {100, 0};
    poor.party_b = {0, 1000};
    SwapAgreement p(symmetric_terms(), poor);
    CHECK_THROWS_AS(p.initiate(), DataError);
}

TEST_CASE("mark") {
    SwapAgreement s(symmetric_terms(), funded());
    CHECK_THROWS_AS(s.mark(tick(1, 1)), StateError);
    s.initiate();
    const auto flat = s.mark(tick(1, 1));
    CHECK(flat.gain_a == 0);
    CHECK(flat.adverse_a == 0);
    CHECK(flat.adverse_b == 0);
    const auto up = s.mark(tick(2, Rational(103, 100)));
    CHECK(up.adverse_b == 3);
    CHECK(up.adverse_a == 0);
    CHECK(up.residual_b == 2);
    const auto down = s.mark(tick(3, Rational(97, 100)));
    CHECK(down.gain_a == -up.gain_a);
    CHECK(down.adverse_a == 3);
    CHECK_THROWS_AS(s.mark(tick(3, 1)), DataError);
    CHECK_THROWS_AS(s.mark(tick(2, 1)), DataError);
}

TEST_CASE("check_and_terminate") {
    SUBCASE("no breach") {
        SwapAgreement s(symmetric_terms(), funded());
        s.initiate();
        CHECK_FALSE(s.check_and_terminate(tick(1, Rational(101, 100))).has_value());
        CHECK(s.state() == SwapState::Active);
    }
    SUBCASE("breach with exposure 3 against margin 5") {
        SwapAgreement s(symmetric_terms(), funded());
        s.initiate();
        const auto before = s.ledger();
        const auto st = s.check_and_terminate(tick(1, Rational(103, 100)));
        REQUIRE(st.has_value());
        CHECK(*st->breaching_party == Party::B);
        CHECK(st->exposure_paid == 3);
        CHECK(st->uncollateralized_loss == 0);
        CHECK(s.ledger().party_a.beta - before.party_a.beta == 3);
        CHECK(s.ledger().party_b.beta - before.party_b.beta == 2);
        CHECK(s.ledger().contract.alpha == 0);
        CHECK(s.ledger().contract.beta == 0);
        CHECK(s.ledger().party_a.alpha - before.party_a.alpha == 5);
        CHECK(s.state() == SwapState::TerminatedBreach);
        CHECK(*s.terminated_by() == Party::B);
        CHECK_THROWS_AS(s.mark(tick(2, 1)), StateError);
        CHECK_THROWS_AS(s.replenish(Party::B, 1), StateError);
    }
    SUBCASE("gap move exhausts the margin") {
        SwapAgreement s(symmetric_terms(), funded());
        s.initiate();
        const auto st = s.check_and_terminate(tick(1, Rational(107, 100)));
        REQUIRE(st.has_value());
        CHECK(st->exposure_paid == 5);
        CHECK(st->uncollateralized_loss == 2);
        CHECK(s.ledger().party_b.beta == 1000 - 100 - 5);
    }
    SUBCASE("A breaches when alpha falls") {
        SwapAgreement s(symmetric_terms(), funded());
        s.initiate();
        const auto st = s.check_and_terminate(tick(1, Rational(96, 100)));
        REQUIRE(st.has_value());
        CHECK(*st->breaching_party == Party::A);
        // 4 beta owed, paid in alpha at 0.96
        CHECK(st->exposure_paid == 4);
        CHECK(s.ledger().party_b.alpha == 150 + Rational(4, 1) / Rational(96, 100));
    }
}

TEST_CASE("replenish") {
    SwapAgreement s(symmetric_terms(), funded());
    s.initiate();
    CHECK_THROWS_AS(s.replenish(Party::B, 0), DomainError);
    s.mark(tick(1, Rational(102, 100)));
    const auto e = s.replenish(Party::B, 3);
    CHECK(e.residual_b == 6);
    CHECK_FALSE(s.check_and_terminate(tick(2, Rational(103, 100))).has_value());
    CHECK(s.ledger().contract.beta == 8);
}

TEST_CASE("voluntary_terminate") {
    auto terms = symmetric_terms();
    terms.termination_fee = 1;
    SUBCASE("zero exposure: only the fee moves") {
        SwapAgreement s(terms, funded());
        s.initiate();
        const auto before = s.ledger();
        const auto st = s.voluntary_terminate(Party::A, tick(1, 1));
        CHECK(st.fee_paid == 1);
        CHECK(st.exposure_paid == 0);
        CHECK(s.ledger().party_b.alpha - before.party_b.alpha == 1);
        CHECK(s.ledger().party_a.alpha - before.party_a.alpha == 4);
        CHECK(s.ledger().party_b.beta - before.party_b.beta == 5);
        CHECK(s.state() == SwapState::TerminatedVoluntary);
        CHECK_THROWS_AS(s.voluntary_terminate(Party::B, tick(2, 1)), StateError);
    }
    SUBCASE("exposure settled before the fee") {
        SwapAgreement s(terms, funded());
        s.initiate();
        const auto st = s.voluntary_terminate(Party::B, tick(1, Rational(102, 100)));
        CHECK(st.exposure_paid == 2);
        CHECK(st.fee_paid == 1);
        CHECK(s.ledger().party_a.beta == 150 + 3);
        CHECK(s.ledger().party_b.beta == 1000 - 100 - 3);
    }
}

TEST_CASE("mature") {
    SwapAgreement s(symmetric_terms(), funded());
    const auto initial = funded();
    s.initiate();
    s.mark(tick(1, Rational(102, 100)));
    s.mature(2);
    CHECK(s.state() == SwapState::Matured);
    CHECK(s.ledger().party_a.alpha == initial.party_a.alpha);
    CHECK(s.ledger().party_a.beta == initial.party_a.beta);
    CHECK(s.ledger().party_b.alpha == initial.party_b.alpha);
    CHECK(s.ledger().party_b.beta == initial.party_b.beta);
    CHECK_THROWS_AS(s.mature(3), StateError);

    auto dated = symmetric_terms();
    dated.maturity = 100;
    SwapAgreement d(dated, funded());
    d.initiate();
    CHECK_THROWS_AS(d.mature(50), StateError);
    d.mature(100);
}

TEST_CASE("accrue_legs") {
    SUBCASE("fixed 4% for 73 days on 100") {
        auto t = symmetric_terms();
        t.leg_a.fixed_rate = Rational(4, 100);
        SwapAgreement s(t, funded());
        s.initiate();
        const auto f = s.accrue_legs(LegPeriod{1, 73, {}, {}});
        CHECK(f.alpha_to_a == Rational(4, 5));
        CHECK(f.beta_to_b == 0);
        CHECK(s.ledger().party_a.alpha == 900 - 5 + Rational(4, 5));
    }
    SUBCASE("zero legs move nothing") {
        SwapAgreement s(symmetric_terms(), funded());
        s.initiate();
        const auto n = s.audit().size();
        s.accrue_legs(LegPeriod{1, 30, {}, {}});
        CHECK(s.audit().size() == n);
    }
    SUBCASE("spread differential") {
        auto t = symmetric_terms();
        t.leg_a = {RateKind::Floating, 0, Rational(1, 100)};
        t.leg_b = {RateKind::Floating, 0, Rational(5, 1000)};
        SwapAgreement s(t, funded());
        s.initiate();
        const auto f = s.accrue_legs(LegPeriod{1, 365, Rational(3, 100), Rational(3, 100)});
        CHECK(f.alpha_to_a - f.beta_to_b == Rational(1, 2));
        CHECK_THROWS_AS(s.accrue_legs(LegPeriod{2, 1, {}, Rational(1, 100)}), DataError);
    }
    SUBCASE("negative rate reverses direction") {
        auto t = symmetric_terms();
        t.leg_a.fixed_rate = Rational(-1, 100);
        SwapAgreement s(t, funded());
        s.initiate();
        const auto f = s.accrue_legs(LegPeriod{1, 365, {}, {}});
        CHECK(f.alpha_to_a == -1);
        CHECK(s.ledger().party_b.alpha == 151);
    }
}

TEST_CASE("buffer_size and max_leverage") {
    CHECK(buffer_size(0.0, 1.0) == 0.0);
    CHECK(buffer_size(0.8, 1.0 / 12.0) == doctest::Approx(0.2309401076758503).epsilon(1e-14));
    CHECK(buffer_size(0.3, 2.0) * 2.0 == doctest::Approx(buffer_size(0.3, 8.0)));
    CHECK(buffer_size(5.0, 1.0) == 1.0);
    CHECK_THROWS_AS(buffer_size(0.5, 0.0), DomainError);

    CHECK(max_leverage(0.05, 10).supremum == doctest::Approx(20.0));
    CHECK(max_leverage(0.05, 1000).achievable < 20.0);
    CHECK(max_leverage(0.5, 2).achievable == 1.5);
    CHECK(max_leverage(0.3, 1).achievable == 1.0);
    CHECK_THROWS_AS(max_leverage(1.0, 3), DomainError);
}

TEST_CASE("lifecycle fuzz") {
    gen::Rng rng(404);
    const auto random_rate = [&](Rational center) {
        // small moves most of the time, occasional gaps
        const auto bp = rng.coin(0.1) ? rng.integer(-1500, 1500) : rng.integer(-300, 300);
        Rational r = center * Rational(10000 + bp, 10000);
        return r > 0 ? r : Rational(1, 100);
    };
    for (int run = 0; run < 300; ++run) {
        auto t = symmetric_terms();
        t.notional_a = rng.integer(10, 500);
        t.initial_rate = Rational(rng.integer(50, 200), 100);
        t.margin_a = t.notional_a * Rational(rng.integer(5, 20), 100);
        t.margin_b = t.notional_b() * Rational(rng.integer(5, 20), 100);
        t.termination_fee = Rational(rng.integer(0, 10), 10);
        t.leg_a.fixed_rate = Rational(rng.integer(-2, 8), 100);
        t.leg_b.fixed_rate = Rational(rng.integer(-2, 8), 100);
        LedgerState l;
        l.party_a = {t.notional_a * 3, t.notional_b()};
        l.party_b = {t.notional_a, t.notional_b() * 3};
        SwapAgreement s(t, l);
        const auto alpha0 = s.ledger().total(Token::Alpha), beta0 = s.ledger().total(Token::Beta);
        s.initiate();

        Timestamp now = 0;
        Rational rate = t.initial_rate;
        Rational posted_a = t.margin_a, posted_b = t.margin_b;
        for (int step = 0; step < 40 && s.state() == SwapState::Active; ++step) {
            now += 3600;
            try {
                switch (rng.integer(0, 9)) {
                case 0: s.accrue_legs(LegPeriod{now, rng.integer(1, 30), {}, {}}); break;
                case 1: {
                    const Party p = rng.coin() ? Party::A : Party::B;
                    const Rational amt = rng.integer(1, 5);
                    s.replenish(p, amt, now);
                    (p == Party::A ? posted_a : posted_b) += amt;
                    break;
                }
                case 2:
                    if (rng.coin(0.2)) s.voluntary_terminate(rng.coin() ? Party::A : Party::B, tick(now, rate));
                    break;
                case 3:
                    if (rng.coin(0.1)) s.mature(now);
                    break;
                default: {
                    rate = random_rate(rate);
                    const auto ex = s.mark(tick(now, rate));
                    now += 1;
                    const auto st = s.check_and_terminate(tick(now, rate));
                    if (st) {
                        const Party winner = other(*st->breaching_party);
                        const Rational owed = winner == Party::A ? ex.adverse_b : ex.adverse_a;
                        CHECK(st->exposure_paid + st->uncollateralized_loss == owed);
                        if (st->uncollateralized_loss == 0) CHECK(st->exposure_paid == owed);  // made whole
                        CHECK(st->uncollateralized_loss >= 0);
                    }
                    break;
                }
                }
            } catch (const DataError&) {
                // a party ran out of tokens for a leg payment or re-exchange; the ledger is untouched
            }
            CHECK(s.ledger().total(Token::Alpha) == alpha0);
            CHECK(s.ledger().total(Token::Beta) == beta0);
        }

        // bounded loss: what left each margin for the counterparty never exceeds what was posted
        Rational out_of_a = 0, out_of_b = 0;
        for (const auto& e : s.audit()) {
            if (e.from != Account::Contract) continue;
            if (e.token == Token::Alpha && e.to == Account::PartyB) out_of_a += e.amount;
            if (e.token == Token::Beta && e.to == Account::PartyA) out_of_b += e.amount;
        }
        CHECK(out_of_a <= posted_a);
        CHECK(out_of_b <= posted_b);
        for (Account a : {Account::PartyA, Account::PartyB, Account::Contract}) {
            CHECK(s.ledger().at(a).alpha >= 0);
            CHECK(s.ledger().at(a).beta >= 0);
        }
        if (s.state() != SwapState::Active) {
            CHECK(s.ledger().contract.alpha == 0);
            CHECK(s.ledger().contract.beta == 0);
            CHECK_THROWS_AS(s.mark(tick(now + 10, rate)), StateError);
            CHECK_THROWS_AS(s.accrue_legs(LegPeriod{now + 10, 1, {}, {}}), StateError);
            CHECK_THROWS_AS(s.mature(now + 10), StateError);
        }
    }
}

TEST_CASE("replay determinism") {
    const auto run = [] {
        auto t = symmetric_terms();
        t.leg_a.fixed_rate = Rational(3, 100);
        SwapAgreement s(t, funded());
        s.initiate(0);
        s.accrue_legs(LegPeriod{10, 30, {}, {}});
        s.check_and_terminate(tick(20, Rational(102, 100)));
        s.replenish(Party::B, 2, 25);
        s.check_and_terminate(tick(30, Rational(104, 100)));
        return s;
    };
    const auto a = run(), b = run();
    REQUIRE(a.audit().size() == b.audit().size());
    for (std::size_t i = 0; i < a.audit().size(); ++i) {
        CHECK(a.audit()[i].amount == b.audit()[i].amount);
        CHECK(a.audit()[i].event == b.audit()[i].event);
    }
    CHECK(a.ledger().party_a.beta == b.ledger().party_a.beta);
}
