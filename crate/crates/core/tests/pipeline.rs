use netbargain::bargain::balanced_outcome;
use netbargain::blockset::{stabilize, stabilize_instance, GbsInstance};
use netbargain::graph::parse_edge_list;
use netbargain::matching::{core_status, CoreStatus};
use netbargain::oracle::{brute_min_blocking_set, gen_gap, verify_outcome};
use netbargain::{q, Rational};

fn run(text: &str) -> (usize, usize, Vec<Rational>) {
    let g = parse_edge_list(text.as_bytes()).unwrap();
    let result = stabilize(&g).unwrap();
    assert!(result.bound_holds());
    let out = balanced_outcome(&g, &result).unwrap();
    assert!(verify_outcome(&g, &result.blocking_set, out.nu, &out).is_empty());
    (result.blocking_set.len(), out.nu, out.allocation)
}

#[test]
fn path_and_edge() {
    let (b, nu, x) = run("a b\nb c\nc d\n");
    assert_eq!((b, nu), (0, 2));
    assert_eq!(x, vec![q(1, 3), q(2, 3), q(2, 3), q(1, 3)]);
    let (b, nu, x) = run("# one edge\nu v\n");
    assert_eq!((b, nu), (0, 1));
    assert_eq!(x, vec![q(1, 2), q(1, 2)]);
}

#[test]
fn triangle_needs_one_block() {
    let g = parse_edge_list(b"a b\nb c\na c\n").unwrap();
    assert_eq!(core_status(&g).unwrap().status, CoreStatus::Empty);
    let result = stabilize(&g).unwrap();
    let opt = brute_min_blocking_set(&g, 1, 3)
        .unwrap()
        .best
        .unwrap()
        .0
        .len();
    assert_eq!(opt, 1);
    assert!(result.blocking_set.len() >= opt);
    assert!(
        Rational::from(result.blocking_set.len() as i64)
            <= &result.guarantee_factor * &Rational::from(opt as i64)
    );
    let (_, nu, x) = run("a b\nb c\na c\n");
    assert_eq!(nu, 1);
    assert_eq!(x.iter().sum::<Rational>(), Rational::one());
}

#[test]
fn gap_base_case_round_trips_through_text() {
    let gap = gen_gap(1).unwrap();
    let inst = GbsInstance::parse(gap.to_text().as_bytes()).unwrap();
    assert_eq!(inst.nu, 1);
    let result = stabilize_instance(&inst, None).unwrap();
    assert_eq!(result.blocking_set.len(), 8);
    assert!(result.bound_holds());
}
