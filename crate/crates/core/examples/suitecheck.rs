use doodlekit::suites;
fn main() {
    for suite in suites::registry() {
        let t = std::time::Instant::now();
        let report = suite.run();
        print!("{}", report.render());
        println!("  -> {} in {:.2?}", if report.passed() { "PASS" } else { "FAIL" }, t.elapsed());
    }
}
