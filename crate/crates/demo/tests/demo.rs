use duc_demo::{builtin_list, gliders, recurrence, spacetime};

#[test]
fn spacetime_returns_to_start_for_i1() {
    let v = spacetime("I1", 8, 16, 3, "").unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 17);
    // I1 has T = L/2
    assert!(v["period"].as_u64().unwrap() <= 4);
}

#[test]
fn spacetime_rejects_bad_states() {
    assert!(spacetime("Z3", 4, 4, 0, "0,1,2").is_err());
    assert!(spacetime("Z3", 4, 4, 0, "0,1,2,3").is_err());
    assert!(spacetime("Z3", 5, 4, 0, "").is_err());
}

#[test]
fn recurrence_matches_small_table() {
    let v = recurrence(3, 2, 10).unwrap();
    let t: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["T"].as_str().unwrap()).collect();
    assert_eq!(t, ["4", "4", "12", "12", "20"]);
}

#[test]
fn gliders_from_pasted_table() {
    let list = builtin_list();
    let e2 = list.as_array().unwrap().iter().find(|b| b["name"] == "E2").unwrap();
    let v = gliders(e2["cd"].as_str().unwrap(), 3).unwrap();
    let counts: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["count"].as_i64().unwrap()).collect();
    assert_eq!(counts, [0, 0, 1]);
    assert!(gliders("(1,1) (1,2) / (2,1) (2,2)", 1).is_err());
}
