//! Invariant suites behind `jpa verify`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jpa_core::constructions::{concatenate_games, exponential, linear_implication, product, tensor};
use jpa_core::games::{boolean_game, enumerate_positions, hide_game, is_subgame, lazy_nat_game};
use jpa_core::machine::{compile, evaluate, interact, InteractOptions, OpponentPolicy, Value, DEFAULT_BUDGET};
use jpa_core::pcf::{atom_strategy, denote_source, materialize, Atom, Ty};
use jpa_core::tags::{promote_depths, seq_decode, seq_encode};
use jpa_core::{OuterTag, TagToken};

use crate::Suite;

/// Programs exercised by the machine suite.
const PROGRAMS: &[&str] = &[
    "zero",
    "succ (succ zero)",
    "pred (succ zero)",
    "ifz zero",
    "case zero (succ zero) ff",
    "fun x: nat. succ x",
    "fun x: nat. ifz x",
    "fun b: bool. case zero (succ zero) b",
    "fun x: nat. fun y: nat. y",
    "fun f: nat -> nat. f (f zero)",
    "(fun f: nat -> nat. f zero) (fun x: nat. x)",
    "fun p: nat * nat. snd p",
    "fix f: nat. zero",
    "fun f: nat -> nat. fun x: nat. case (f x) x (ifz x)",
];

const ADD: &str = "(fix add: nat -> nat -> nat. fun m: nat. fun n: nat. case n (succ (add (pred m) n)) (ifz m))";

#[derive(Default)]
struct Report {
    checks: usize,
    failures: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

pub fn run(suite: Suite, depth: Option<usize>, seeds: Option<u64>, seed: u64) -> Result<(), String> {
    let (d, n) = match suite {
        Suite::Tags => (depth.unwrap_or(4), seeds.unwrap_or(1000)),
        Suite::Games => (depth.unwrap_or(8), seeds.unwrap_or(1)),
        Suite::Machine => (depth.unwrap_or(24), seeds.unwrap_or(100)),
        Suite::Pcf => (depth.unwrap_or(16), seeds.unwrap_or(1)),
    };
    let r = match suite {
        Suite::Tags => tags(d, n, seed),
        Suite::Games => games(d),
        Suite::Machine => machine(d, n, seed),
        Suite::Pcf => pcf(d),
    };
    let name = format!("{suite:?}").to_lowercase();
    println!("suite {name}: depth {d}, seeds {n}, seed {seed}");
    for f in &r.failures {
        println!("FAIL {f}");
    }
    println!("{} checks, {} failures", r.checks, r.failures.len());
    if r.failures.is_empty() {
        println!("PASS");
        Ok(())
    } else {
        Err(format!("suite {name} failed"))
    }
}

fn random_word(rng: &mut ChaCha8Rng, depth: u32, max: u32) -> Vec<TagToken> {
    let mut out = Vec::new();
    for i in 0..rng.gen_range(1..=3) {
        if i > 0 {
            out.push(TagToken::H);
        }
        if depth < max && rng.gen_bool(0.4) {
            out.push(TagToken::Open(depth));
            out.extend(random_word(rng, depth + 1, max));
            out.push(TagToken::Close(depth));
        } else {
            out.extend((0..rng.gen_range(0..4)).map(|_| TagToken::L));
        }
    }
    out
}

fn tags(depth: usize, seeds: u64, seed: u64) -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0u32..10_000 {
        let x = BigUint::from(n);
        let xs = seq_decode(&x);
        r.check(seq_encode(&xs) == x, || format!("code {n} does not round-trip"));
    }
    for _ in 0..seeds {
        let xs: Vec<BigUint> = (0..rng.gen_range(0..=depth))
            .map(|_| BigUint::from(rng.gen_range(0u32..1000)))
            .collect();
        r.check(seq_decode(&seq_encode(&xs)) == xs, || {
            format!("sequence {xs:?} does not round-trip")
        });
        let e = OuterTag(random_word(&mut rng, 0, depth as u32));
        r.check(e.is_wellformed() && e.decode().is_ok(), || {
            format!("generated word {e} rejected")
        });
        r.check(OuterTag::parse(&e.to_string()).as_ref() == Ok(&e), || {
            format!("word {e} does not reparse")
        });
        let w = OuterTag::wrap(&e, &OuterTag::empty());
        r.check(w.unwrap_group() == Some((e.clone(), OuterTag::empty())), || {
            format!("word {e} does not unwrap")
        });
        r.check(promote_depths(&e).demoted(1) == e, || {
            format!("promotion of {e} is not invertible")
        });
    }
    r
}

fn games(depth: usize) -> Report {
    let mut r = Report::default();
    let n = lazy_nat_game();
    let b = boolean_game();
    let nn = linear_implication(&n, &n);
    let arenas = [
        ("N", n.clone()),
        ("2", b.clone()),
        ("N -o N", nn.clone()),
        ("N x N", tensor(&n, &n)),
        ("N & 2", product(&n, &b)),
        ("!N -o N", linear_implication(&exponential(&n), &n)),
        ("succ", atom_strategy(&Atom::Succ).game().clone()),
        ("ifz", atom_strategy(&Atom::IfZero).game().clone()),
        ("case", atom_strategy(&Atom::Case(Ty::Nat)).game().clone()),
    ];
    for (name, g) in &arenas {
        for s in enumerate_positions(g, depth) {
            r.check(g.accepts(&s).is_ok(), || {
                format!("{name}: enumerated position rejected\n{}", s.to_trace())
            });
            r.check(g.accepts(&s.p_view()).is_ok(), || {
                format!("{name}: P-view rejected\n{}", s.to_trace())
            });
        }
    }
    let hidden = hide_game(&concatenate_games(&nn, &nn, &n));
    r.check(is_subgame(&hidden, &nn, depth.min(10)), || {
        "hidden concatenation is not a subgame of N -o N".into()
    });
    r
}

fn machine(depth: usize, seeds: u64, seed: u64) -> Report {
    let per_program: Vec<Report> = std::thread::scope(|sc| {
        let hs: Vec<_> = PROGRAMS
            .iter()
            .map(|src| sc.spawn(move || machine_program(src, depth, seeds, seed)))
            .collect();
        hs.into_iter()
            .map(|h| h.join().unwrap_or_else(|_| panic_report()))
            .collect()
    });
    let mut r = Report::default();
    per_program.into_iter().for_each(|p| r.merge(p));
    r
}

fn panic_report() -> Report {
    Report {
        checks: 1,
        failures: vec!["a suite thread panicked".into()],
    }
}

fn machine_program(src: &str, depth: usize, seeds: u64, seed: u64) -> Report {
    let mut r = Report::default();
    let d = match denote_source(src) {
        Ok((d, _)) => d,
        Err(e) => {
            r.check(false, || format!("`{src}`: {e}"));
            return r;
        }
    };
    let (m, sigma) = match (compile(&d), materialize(&d)) {
        (Ok(m), Ok(s)) => (m, s),
        (Err(e), _) | (_, Err(e)) => {
            r.check(false, || format!("`{src}`: {e}"));
            return r;
        }
    };
    let opts = InteractOptions {
        budget: DEFAULT_BUDGET,
        snapshots: false,
        max_len: Some(depth),
    };
    for k in seed..seed + seeds {
        let t = match interact(&m, &mut OpponentPolicy::random_legal(k), &opts) {
            Ok(t) => t,
            Err(e) => {
                r.check(false, || format!("`{src}` seed {k}: {e}"));
                continue;
            }
        };
        let s = &t.position;
        for i in (1..s.len()).step_by(2) {
            let want = sigma.respond(&s.prefix(i)).map(|x| x.occ());
            r.check(want.as_ref() == Some(&s.0[i]), || {
                format!(
                    "`{src}` seed {k}: move {} differs from the strategy\n{}",
                    i + 1,
                    s.prefix(i + 1).to_trace()
                )
            });
        }
    }
    r
}

fn numeral(n: usize) -> String {
    (0..n).fold("zero".to_string(), |acc, _| format!("succ ({acc})"))
}

fn pcf(depth: usize) -> Report {
    let mut r = Report::default();
    let mut expect = |src: String, want: Value| {
        let got = denote_source(&src)
            .map_err(|e| e.to_string())
            .and_then(|(d, _)| evaluate(&d, DEFAULT_BUDGET).map_err(|e| e.to_string()));
        r.check(got.as_ref() == Ok(&want), || {
            format!("`{src}`: got {got:?}, want {want}")
        });
    };
    for n in 0..=depth {
        let x = numeral(n);
        expect(x.clone(), Value::Nat(n as u64));
        expect(format!("succ ({x})"), Value::Nat(n as u64 + 1));
        expect(format!("pred ({x})"), Value::Nat(n.saturating_sub(1) as u64));
        expect(format!("ifz ({x})"), Value::Bool(n == 0));
        expect(format!("case zero ({x}) (ifz ({x}))"), Value::Nat(n as u64));
        expect(format!("(fun x: nat. succ x) ({x})"), Value::Nat(n as u64 + 1));
    }
    let k = depth.min(4);
    for a in 0..=k {
        for b in 0..=k {
            expect(
                format!("{ADD} ({}) ({})", numeral(a), numeral(b)),
                Value::Nat((a + b) as u64),
            );
        }
    }
    r
}
