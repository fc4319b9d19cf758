//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use committee_power::cli::default_s_values;
use committee_power::equivalence::{
    enumerate_classes, s_scores, EquivalenceClassSet, ReferenceTable,
};
use committee_power::grid::{WeightGrid, DEFAULT_DENOMINATOR};
use committee_power::power::pbi;
use committee_power::rational::{format_rational, int, ratio};
use committee_power::render::{render_map, sweep, Painter, RenderOptions};
use committee_power::scoring::{rule_mapping, score_totals};
use committee_power::{Profile, Ranking, Rational, ScoringCommittee, ScoringVector};
use num_traits::Zero;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Outcome = Result<String, String>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

fn committee(weights: &[i64], s: Rational) -> ScoringCommittee {
    ScoringCommittee::with_s(weights.iter().map(|&w| int(w)).collect(), &s).unwrap()
}

fn exact_three_player_power() -> Outcome {
    let t = Instant::now();
    let p = pbi(&committee(&[6, 5, 3], ratio(1, 2))).map_err(|e| e.to_string())?;
    within(t.elapsed(), Duration::from_secs(1))?;
    let want = [ratio(588, 864), ratio(516, 864), ratio(312, 864)];
    ensure(p.values() == want && p.denominator() == 864, || {
        format!("got {:?}/{}", p.swing_counts(), p.denominator())
    })?;
    Ok(format!("{:?}/864 in {:.2?}", p.swing_counts(), t.elapsed()))
}

fn four_player_power() -> Outcome {
    let t = Instant::now();
    let p = pbi(&committee(&[5, 4, 3, 1], int(0))).map_err(|e| e.to_string())?;
    within(t.elapsed(), Duration::from_secs(5))?;
    let d = p.decimals(4);
    ensure(
        d == ["0.6296", "0.4815", "0.4444", "0.0741"] && p.denominator() == 5184,
        || format!("got {d:?} over {}", p.denominator()),
    )?;
    Ok(format!(
        "{} over {} in {:.2?}",
        d.join(", "),
        p.denominator(),
        t.elapsed()
    ))
}

fn club_winners() -> Outcome {
    let r = |o: [usize; 3]| Ranking::new(o.to_vec()).unwrap();
    let (ann, bob, clara) = (0, 1, 2);
    let profile = Profile::new(vec![
        r([bob, clara, ann]),
        r([ann, clara, bob]),
        r([ann, bob, clara]),
        r([bob, clara, ann]),
    ])
    .unwrap();
    let cases = [
        (int(0), [7, 6, 0], ann),
        (ratio(1, 2), [14, 15, 10], bob),
        (int(1), [7, 9, 10], clara),
    ];
    let mut seen = Vec::new();
    for (s, totals, expected) in cases {
        // totals are stated for the integer vectors (1,0,0), (2,1,0), (1,1,0)
        let scale = if s == ratio(1, 2) { int(2) } else { int(1) };
        let scores = ScoringVector::from_s(&s)
            .unwrap()
            .scores()
            .iter()
            .map(|v| v * &scale)
            .collect();
        let c = ScoringCommittee::from_integers(&[5, 4, 3, 1], ScoringVector::new(scores).unwrap())
            .unwrap();
        let t = score_totals(&c, &profile).map_err(|e| e.to_string())?;
        let want: Vec<Rational> = totals.iter().map(|&v| int(v)).collect();
        ensure(t.totals() == want && t.winner() == expected, || {
            format!(
                "s={}: totals {:?}, winner {}",
                format_rational(&s),
                t.totals(),
                t.winner()
            )
        })?;
        seen.push(format!(
            "{:?}->{}",
            totals,
            ["Ann", "Bob", "Clara"][t.winner()]
        ));
    }
    Ok(seen.join(" "))
}

fn dictator_normalization() -> Outcome {
    let p = pbi(&committee(&[3, 1, 1], int(0))).map_err(|e| e.to_string())?;
    let formula = common::dictator_swings(3, 3);
    ensure(
        p.denominator() == 864 && formula == 864 && p.swing_counts()[0] == 864,
        || {
            format!(
                "denominator {}, swings {:?}",
                p.denominator(),
                p.swing_counts()
            )
        },
    )?;
    ensure(p.swing_counts()[1] == 0 && p.swing_counts()[2] == 0, || {
        format!("minority players swing: {:?}", p.swing_counts())
    })?;
    Ok("denominator 864, majority player 864 swings".into())
}

struct Counts {
    at_default: Vec<(Rational, EquivalenceClassSet, Duration)>,
}

fn count_classes() -> Counts {
    let grid = WeightGrid::new(DEFAULT_DENOMINATOR).unwrap();
    let at_default = default_s_values()
        .into_iter()
        .map(|s| {
            let t = Instant::now();
            let set = enumerate_classes(&s, &grid).unwrap();
            (s, set, t.elapsed())
        })
        .collect();
    Counts { at_default }
}

fn class_counts(counts: &Counts) -> Outcome {
    let find = |s: &Rational| counts.at_default.iter().find(|(v, _, _)| v == s).unwrap();
    let doubled = WeightGrid::new(2 * DEFAULT_DENOMINATOR).unwrap();
    let mut report = Vec::new();
    for (s, expected) in [(int(0), 6), (ratio(1, 2), 51), (int(1), 5)] {
        let (_, set, elapsed) = find(&s);
        within(*elapsed, Duration::from_secs(600))?;
        let t = Instant::now();
        let fine = enumerate_classes(&s, &doubled).map_err(|e| e.to_string())?;
        within(t.elapsed(), Duration::from_secs(600))?;
        ensure(set.len() == expected, || {
            format!(
                "s={}: {} classes, expected {expected}",
                format_rational(&s),
                set.len()
            )
        })?;
        ensure(fine.len() == set.len(), || {
            format!(
                "s={}: {} classes at D={}",
                format_rational(&s),
                fine.len(),
                doubled.denominator()
            )
        })?;
        report.push(format!(
            "s={} {} ({} hit by the grid, {} at 2D)",
            format_rational(&s),
            set.len(),
            set.grid_count(),
            fine.grid_count()
        ));
    }
    let (_, plurality, _) = find(&int(0));
    let table =
        ReferenceTable::build(&s_scores(&int(0)).unwrap(), 20).map_err(|e| e.to_string())?;
    let refs: BTreeSet<[u64; 3]> = plurality
        .classes
        .iter()
        .map(|c| table.lookup(&c.key))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let want: BTreeSet<[u64; 3]> = [
        [1, 0, 0],
        [1, 1, 0],
        [1, 1, 1],
        [2, 1, 1],
        [2, 2, 1],
        [3, 2, 2],
    ]
    .into();
    ensure(refs == want, || format!("references at s=0: {refs:?}"))?;
    Ok(report.join("; "))
}

fn m_shape(counts: &Counts) -> Outcome {
    let c: Vec<usize> = counts
        .at_default
        .iter()
        .map(|(_, set, _)| set.len())
        .collect();
    let max = *c.iter().max().unwrap();
    let curve = c.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    ensure(c.len() == 21, || "expected 21 values".into())?;
    ensure(max == 229, || format!("maximum {max}; counts {curve}"))?;
    ensure(c[1] > c[0] && c[19] > c[20], || {
        format!("no rise from the ends: {curve}")
    })?;
    ensure(c[10] < c[9] && c[10] < c[11], || {
        format!("no dip at 1/2: {curve}")
    })?;
    Ok(format!("max {max}; counts {curve}"))
}

fn runner() -> TestRunner {
    TestRunner::deterministic()
}

fn random_committees(n: usize, count: usize) -> Vec<ScoringCommittee> {
    let weight = (0i64..=12, 1i64..=5).prop_map(|(p, q)| ratio(p, q));
    let s = (0i64..=10, 1i64..=10).prop_map(|(p, q)| ratio(p.min(q), q));
    let strategy = (proptest::collection::vec(weight, n), s)
        .prop_filter("positive weight", |(w, _)| w.iter().any(|x| !x.is_zero()))
        .prop_map(|(w, s)| ScoringCommittee::with_s(w, &s).unwrap());
    let mut r = runner();
    (0..count)
        .map(|_| strategy.new_tree(&mut r).unwrap().current())
        .collect()
}

fn oracle_agreement() -> Outcome {
    let mut checked = [0usize; 2];
    for (slot, (n, count)) in [(3, 100), (4, 10)].into_iter().enumerate() {
        for c in random_committees(n, count) {
            let fast = pbi(&c).map_err(|e| e.to_string())?;
            let naive = common::swings(c.weights(), c.scoring().scores());
            ensure(fast.swing_counts() == naive.as_slice(), || {
                format!(
                    "{:?}: engine {:?}, oracle {naive:?}",
                    c.weights(),
                    fast.swing_counts()
                )
            })?;
            ensure(
                fast.denominator() == common::dictator_swings(n as u32, 3),
                || "denominator".into(),
            )?;
            checked[slot] += 1;
        }
    }
    Ok(format!(
        "{} committees with n=3, {} with n=4",
        checked[0], checked[1]
    ))
}

fn invariance() -> Outcome {
    let committees = random_committees(3, 100);
    let mut zero_checked = 0;
    for (k, c) in committees.iter().enumerate() {
        let base_map = rule_mapping(c).map_err(|e| e.to_string())?;
        let base = pbi(c).map_err(|e| e.to_string())?;

        let factor = ratio(k as i64 % 7 + 1, k as i64 % 3 + 2);
        let scaled = c
            .with_weights(c.weights().iter().map(|w| w * &factor).collect())
            .unwrap();
        ensure(rule_mapping(&scaled).unwrap() == base_map, || {
            format!("scaling {:?}", c.weights())
        })?;

        let (a, b) = (ratio(k as i64 % 5 + 1, 3), ratio(k as i64 % 9 - 4, 2));
        let shifted = c.with_scoring(
            ScoringVector::new(c.scoring().scores().iter().map(|v| v * &a + &b).collect()).unwrap(),
        );
        ensure(pbi(&shifted).unwrap() == base, || {
            format!("affine scoring {:?}", c.weights())
        })?;

        let perm = [
            [1, 2, 0],
            [2, 0, 1],
            [0, 2, 1],
            [1, 0, 2],
            [2, 1, 0],
            [0, 1, 2],
        ][k % 6];
        let moved = pbi(&c.permuted(&perm)).unwrap();
        for j in 0..3 {
            ensure(
                moved.swing_counts()[j] == base.swing_counts()[perm[j]],
                || format!("permutation {perm:?} of {:?}", c.weights()),
            )?;
        }

        for (i, w) in c.weights().iter().enumerate() {
            if w.is_zero() {
                zero_checked += 1;
                ensure(base.swing_counts()[i] == 0, || {
                    format!("zero weight with power in {:?}", c.weights())
                })?;
            }
        }
        let mut w = c.weights().to_vec();
        w[k % 3] = Rational::zero();
        if w.iter().any(|x| !x.is_zero()) {
            let z = pbi(&c.with_weights(w.clone()).unwrap()).unwrap();
            zero_checked += 1;
            ensure(z.swing_counts()[k % 3] == 0, || {
                format!("zero weight with power in {w:?}")
            })?;
        }
    }
    Ok(format!(
        "{} committees each; {zero_checked} zero-weight players",
        committees.len()
    ))
}

fn rendering() -> Outcome {
    let s = int(0);
    let d = DEFAULT_DENOMINATOR;
    let opts = RenderOptions::new(900);
    let sw = sweep(&s, d).map_err(|e| e.to_string())?;
    let image = render_map(&sw, &s, d, &opts).map_err(|e| e.to_string())?;
    let painter = Painter::new(&sw, &opts).map_err(|e| e.to_string())?;
    let layout = *painter.layout();
    let blue = [0, 0, 255];

    let mut inside = Vec::new();
    let (mut blue_pixels, mut boundary_band) = (0usize, 0usize);
    for y in 0..image.height {
        for x in 0..image.width {
            let Some(b) = layout.barycentric(x, y) else {
                continue;
            };
            inside.push((x, y, b));
            let px = image.pixel(x, y);
            let g = painter.grid_point(b);
            let dominant = 2 * g[0] > d;
            ensure((px == blue) == dominant, || {
                format!("pixel ({x},{y}) grid {g:?} colored {px:?}")
            })?;
            blue_pixels += usize::from(px == blue);
            let top = b.iter().cloned().fold(f64::MIN, f64::max);
            if (top - 0.5).abs() > 2.0 / d as f64 {
                ensure((px == blue) == (top > 0.5), || {
                    format!("pixel ({x},{y}) at {b:?} colored {px:?}")
                })?;
            } else {
                boundary_band += 1;
            }
        }
    }

    const PERMS: [[usize; 3]; 5] = [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut r = runner();
    let pick = proptest::sample::select((0..inside.len()).collect::<Vec<_>>());
    for _ in 0..1000 {
        let (x, y, b) = inside[pick.new_tree(&mut r).unwrap().current()];
        let px = image.pixel(x, y);
        ensure(image.pixel(image.width - 1 - x, y) == px, || {
            format!("mirror of ({x},{y})")
        })?;
        for p in PERMS {
            let c = painter.color_at([b[p[0]], b[p[1]], b[p[2]]]);
            ensure(c == px, || {
                format!("relabeling {p:?} of ({x},{y}) gives {c:?}, pixel {px:?}")
            })?;
        }
    }

    let first = image.encode_png().map_err(|e| e.to_string())?;
    let again = render_map(&sweep(&s, d).unwrap(), &s, d, &opts)
        .and_then(|i| i.encode_png())
        .map_err(|e| e.to_string())?;
    ensure(first == again, || "second run differs".into())?;

    let mono = pbi(&committee(&[1, 0, 0], int(1))).map_err(|e| e.to_string())?;
    let naive = common::swings(
        &[int(1), int(0), int(0)],
        ScoringVector::from_s(&int(1)).unwrap().scores(),
    );
    ensure(
        mono.value(0) == ratio(2, 3) && naive[0] * 3 == 2 * mono.denominator(),
        || format!("monopolist power {}", format_rational(&mono.value(0))),
    )?;

    Ok(format!(
        "{} of {} inside pixels dark blue ({} near the 1/2 boundary checked on the grid only); \
         1000 reflections; byte-identical; monopolist 2/3",
        blue_pixels,
        inside.len(),
        boundary_band
    ))
}

fn main() {
    // `cargo test -- <filter>` passes arguments; only listing mode needs handling.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let started = Instant::now();
    let counts = count_classes();
    let checks: Vec<Check> = vec![
        (
            "exact power of (6,5,3) at s=1/2",
            Box::new(exact_three_player_power),
        ),
        (
            "four-player power of (5,4,3,1) at s=0",
            Box::new(four_player_power),
        ),
        ("club example totals and winners", Box::new(club_winners)),
        ("dictator normalization", Box::new(dictator_normalization)),
        (
            "class counts and reference weights",
            Box::new(|| class_counts(&counts)),
        ),
        ("class count curve over s", Box::new(|| m_shape(&counts))),
        ("brute-force oracle agreement", Box::new(oracle_agreement)),
        ("invariance suite", Box::new(invariance)),
        ("simplex rendering", Box::new(rendering)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| {
            failed += 1;
            e
        });
        println!(
            "criterion {}: {status} {name} [{:.1?}] {detail}",
            i + 1,
            t.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1?}",
        checks.len() - failed,
        started.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
