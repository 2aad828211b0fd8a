use num_bigint::BigInt;

use thue_core::bounds::derive_t_max;
use thue_core::forms::{f3, BinaryCubicForm};
use thue_core::reduction::{default_a, default_q, verify_range, verify_t, Status};
use thue_core::roots_asym::verify_kappas;
use thue_core::search::{scan_2d, table_entries, thue_solutions_bruteforce, TableGroup};

#[test]
fn search_agrees_with_full_scan() {
    for e in table_entries().into_iter().filter(|e| e.group == TableGroup::AtLeastSix) {
        let f = BinaryCubicForm::homogenize(e.coeffs);
        let fast = thue_solutions_bruteforce(&f, 50).unwrap().solutions;
        assert_eq!(fast, scan_2d(&f, 1_000_000, 50).unwrap(), "{:?}", e.coeffs);
    }
}

#[test]
fn kappas_and_tmax_feed_reduction() {
    assert!(verify_kappas(10).unwrap().all_pass());
    let tm = derive_t_max(2).unwrap();
    let rec = verify_t(2, tm.t_max, &default_a(), &default_q(), None);
    assert_eq!(rec.status, Status::Success);
    assert_eq!(rec.schema, 1);
}

#[test]
fn all_three_forms_reduce() {
    for which in 1..=3u8 {
        let rep = verify_range(which, 10, 14, &default_a(), &default_q(), 2).unwrap();
        assert!(rep.all_success(), "Λ{which}: {:?}", rep.records);
    }
}

#[test]
fn f3_at_two_has_large_solution() {
    let r = thue_solutions_bruteforce(&f3(2), 200).unwrap();
    assert!(r.solutions.iter().any(|s| s.y == BigInt::from(172)));
}
