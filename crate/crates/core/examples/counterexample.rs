fn main() {
    let rep = greedy_sensors::counterexample_report::<f64>().unwrap();
    print!("{}", rep.to_text());
}
