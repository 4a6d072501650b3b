use nubots::constructions::gen_line_doubling;

fn main() {
    // criterion 1: single chain mean
    let c = gen_line_doubling(2).unwrap();
    let est = c.estimate(10_000, 42);
    println!("l=2  mean={:.3} (formula 13.0), success={}", est.mean, est.success_rate);
    for l in [4usize, 8, 16, 32] {
        let c = gen_line_doubling(l).unwrap();
        let est = c.estimate(2_000, 42);
        let m = l / 2;
        let formula: f64 = 13.0 * (1..=m).map(|i| 1.0 / i as f64).sum::<f64>();
        println!(
            "l={l}  mean={:.3}  formula={:.3}  ratio={:.3}  success={}",
            est.mean, formula, est.mean / formula, est.success_rate
        );
    }
}
