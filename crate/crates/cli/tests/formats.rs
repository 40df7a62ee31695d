use proptest::prelude::*;
use rotset::formats::{parse_matrix, parse_number, parse_potential, parse_sft, write_potential, write_sft};
use rotset_core::{LcPotential, Limits, Ratio, Sft};

const GOLDEN: &str = "# golden mean\nd = 2\ntheta = 1/2\nA =\n11\n10\n";

fn golden() -> Sft {
    Sft::new(2, &[vec![1, 1], vec![1, 0]], Ratio::new(1, 2).unwrap()).unwrap()
}

#[test]
fn reads_golden_mean() {
    assert_eq!(parse_sft(GOLDEN).unwrap(), golden());
    // spaces between digits, trailing comments, key order
    let loose = "theta = 2/4   # reduced\n  d=2\nA =\n 1 1\n1 0 # last\n";
    assert_eq!(parse_sft(loose).unwrap(), golden());
}

fn pos(src: &str) -> (usize, usize) {
    let e = parse_sft(src).unwrap_err();
    (e.line, e.column)
}

#[test]
fn shift_errors_carry_positions() {
    assert_eq!(pos("d = 2\ntheta = 1/2\nA =\n11\n1x\n"), (5, 2));
    assert_eq!(pos("d = 0\n"), (1, 5));
    assert_eq!(pos("d = 2\ntheta = 3/2\n"), (2, 9));
    assert_eq!(pos("d = 2\ntheta = 0.5\n"), (2, 9));
    assert_eq!(pos("A =\nd = 2\n"), (1, 1));
    assert_eq!(pos("d = 2\n\n  colour = red\n"), (3, 3));
    assert_eq!(pos("d = 2\nd = 3\n"), (2, 1));
    assert_eq!(pos("d = 2\ntheta = 1/2\nA =\n11\n"), (5, 1));
    assert_eq!(pos("d = 2\ntheta = 1/2\nA =\n11\n10\n11\n"), (6, 1));
    assert_eq!(pos("d = 2\ntheta = 1/2\nA =\n111\n"), (4, 1));
    // symbol 1 has no predecessor: reported on the A line
    assert_eq!(pos("d = 2\ntheta = 1/2\nA =\n10\n10\n"), (3, 1));
    assert_eq!(pos("d = 2\nA =\n11\n11\n"), (5, 1));
    let e = parse_sft("d = 2\ntheta = 1/2\nA =\n11\n1x\n").unwrap_err();
    assert_eq!(e.to_string(), "line 5, column 2: expected 0 or 1, found 'x'");
}

#[test]
fn reads_potential_tables() {
    let lim = Limits::default();
    let src = "k = 2\nm = 2\n00: 1 0\n01: 0 1\n10: -1/4 2.5e-1\n";
    let p = parse_potential(src, &golden(), &lim).unwrap();
    assert_eq!(p.value_of(&[1, 0]).unwrap(), &[-0.25, 0.25]);
    let want = LcPotential::from_table(
        &golden(),
        2,
        2,
        &[
            (vec![0, 0], vec![1.0, 0.0]),
            (vec![0, 1], vec![0.0, 1.0]),
            (vec![1, 0], vec![-0.25, 0.25]),
        ],
        &lim,
    )
    .unwrap();
    assert_eq!(p, want);
}

fn ppos(src: &str) -> (usize, usize, String) {
    let e = parse_potential(src, &golden(), &Limits::default()).unwrap_err();
    (e.line, e.column, e.message)
}

#[test]
fn potential_errors_carry_positions() {
    let (l, c, _) = ppos("k = 1\nm = 1\n0: 0\n1: x\n");
    assert_eq!((l, c), (4, 4));
    let (l, c, msg) = ppos("k = 2\nm = 1\n00: 0\n11: 0\n");
    assert_eq!((l, c), (4, 1));
    assert!(msg.contains("not admissible"), "{msg}");
    let (l, c, msg) = ppos("k = 1\nm = 1\n0: 0\n");
    assert_eq!((l, c), (4, 1));
    assert!(msg.contains("missing word 1"), "{msg}");
    let (l, _, msg) = ppos("k = 1\nm = 1\n0: 0\n0: 1\n");
    assert_eq!(l, 4);
    assert!(msg.contains("line 3"), "{msg}");
    let (l, c, _) = ppos("k = 1\nm = 2\n0: 0\n");
    assert_eq!((l, c), (3, 3));
    let (l, _, _) = ppos("0: 1\n");
    assert_eq!(l, 1);
    let (l, c, _) = ppos("k = 1\nm = 1\n2: 0\n");
    assert_eq!((l, c), (3, 1));
    let (l, _, _) = ppos("k = 1\nm = 1\n0: 1/0\n1: 0\n");
    assert_eq!(l, 3);
}

#[test]
fn numbers() {
    assert_eq!(parse_number("-3/4"), Some(-0.75));
    assert_eq!(parse_number("1e-3"), Some(0.001));
    assert_eq!(parse_number("inf"), None);
    assert_eq!(parse_number("NaN"), None);
    assert_eq!(parse_number("1/0"), None);
    assert_eq!(parse_number("1.5/2"), None);
}

#[test]
fn wide_alphabet_words_are_dotted() {
    let lim = Limits::default();
    let s = Sft::full_shift(12, Ratio::new(1, 3).unwrap()).unwrap();
    let p = LcPotential::from_fn(&s, 2, 1, &lim, |w| vec![(w[0] * 12 + w[1]) as f64]).unwrap();
    let text = write_potential(&p);
    assert!(text.contains("\n11.10: 142.0\n"), "{text}");
    assert_eq!(parse_potential(&text, &s, &lim).unwrap(), p);
    assert_eq!(parse_sft(&write_sft(&s)).unwrap(), s);
}

#[test]
fn matrices() {
    assert_eq!(parse_matrix("1 1\n1 0\n").unwrap(), vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
    let e = parse_matrix("1 1\n1\n").unwrap_err();
    assert_eq!((e.line, e.column), (2, 1));
    let e = parse_matrix("1 -1\n1 0\n").unwrap_err();
    assert_eq!((e.line, e.column), (1, 3));
    assert!(parse_matrix("1 1 1\n1 0 1\n").is_err());
    assert!(parse_matrix("# nothing\n").is_err());
}

fn arb_sft() -> impl Strategy<Value = Sft> {
    (1usize..=5, any::<u64>(), 1u64..=9).prop_map(|(d, bits, p)| {
        // a cycle through all symbols keeps every letter in use
        let rows: Vec<Vec<u8>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| u8::from(j == (i + 1) % d || (bits >> ((i * d + j) % 64)) & 1 == 1))
                    .collect()
            })
            .collect();
        Sft::new(d, &rows, Ratio::new(p, 10).unwrap()).unwrap()
    })
}

fn arb_value() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        Just(1e-300),
        Just(-0.1),
        Just(1.0 / 3.0),
        Just(0.0),
        Just(f64::MAX),
        Just(f64::MIN_POSITIVE),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_round_trip(s in arb_sft()) {
        prop_assert_eq!(parse_sft(&write_sft(&s)).unwrap(), s);
    }

    #[test]
    fn potential_round_trip(s in arb_sft(), k in 1usize..=3, m in 1usize..=3, vals in proptest::collection::vec(arb_value(), 1..40)) {
        let lim = Limits::default();
        let mut i = 0;
        let p = LcPotential::from_fn(&s, k, m, &lim, |_| {
            let v = (0..m).map(|j| vals[(i + j) % vals.len()]).collect();
            i += 1;
            v
        }).unwrap();
        let text = write_potential(&p);
        prop_assert_eq!(parse_potential(&text, &s, &lim).unwrap(), p);
    }
}
