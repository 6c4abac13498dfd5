use knapdc::tables::*;

#[test]
fn table10_golden() {
    let t = table10();
    assert_eq!(t.failures(), 0);
    let mut out = Vec::new();
    t.write_csv(&mut out).unwrap();
    assert_eq!(
        String::from_utf8(out).unwrap(),
        "delta,mu,variance,trials\n\
         63,64,0.7329,1127\n\
         127,128,0.7493,1152\n\
         255,256,0.7575,1165\n\
         511,512,0.7616,1171\n\
         1023,1024,0.7637,1174\n"
    );
}

#[test]
fn table9_from_printed_means() {
    let t = table9();
    assert_eq!(t.failures(), 0);
    for h in ["3", "4"] {
        assert_eq!(t.value(&["printed", h], "lb_gr"), Some(50.0));
    }
    assert_eq!(t.value(&["printed", "4"], "lb_ef"), Some(50.0));
    assert_eq!(t.checks.len(), 16);
}

#[test]
fn check_status() {
    let mut c = Check {
        table: "t".into(),
        row: "r".into(),
        column: "c".into(),
        computed: 1.0,
        reference: 1.02,
        tolerance: Some(0.02),
    };
    assert_eq!(c.status(), Status::Pass);
    c.computed = 0.97;
    assert_eq!(c.status(), Status::Fail);
    c.tolerance = None;
    assert_eq!(c.status(), Status::Info);
}

#[test]
fn diff_report_layout() {
    let t = table10();
    let mut out = Vec::new();
    write_diff_csv(&mut out, &t.checks).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "table,row,column,computed,reference,tolerance,status"
    );
    assert_eq!(
        lines.next().unwrap(),
        "table10,63,variance,0.7329,0.7329,0.00005,PASS"
    );
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn grid_tables_have_every_row() {
    let t = table6();
    assert_eq!(t.rows.len(), reference::GRID.len());
    assert_eq!(t.columns[0], "mu");
    let lb = t.value(&["299"], "lb_gr").unwrap();
    assert!((lb - 71.98).abs() < 0.01);
    let plot = plot_series(&[49, 99]);
    assert_eq!(plot.rows.len(), 2);
}
