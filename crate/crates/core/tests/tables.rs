use smallhouse_core::tables::{
    verify_difference_lemmas, verify_family_levels, verify_splitting, verify_table1,
    verify_table2, verify_table3,
};

#[test]
fn table1_reproduces() {
    let r = verify_table1();
    println!("{r}");
    assert!(r.passed);
}

#[test]
fn table2_reproduces() {
    let r = verify_table2();
    println!("{r}");
    assert!(r.passed);
}

#[test]
fn table3_reproduces() {
    let r = verify_table3();
    println!("{r}");
    assert!(r.passed);
}

#[test]
fn family_levels_match_case_analysis() {
    let r = verify_family_levels(200);
    println!("{r}");
    assert!(r.passed);
}

#[test]
fn splitting_tables_reproduce() {
    let r = verify_splitting();
    println!("{r}");
    assert!(r.passed);
}

#[test]
fn difference_lemmas_hold() {
    let r = verify_difference_lemmas();
    println!("{r}");
    assert!(r.passed);
}
