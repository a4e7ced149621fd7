fn main() {
    let t0 = std::time::Instant::now();
    let res = tdiam::resultant::resultant_generic_quadratic_ternary().unwrap();
    println!("terms = {}", res.term_count);
    println!("total degree = {}", res.total_degree);
    let pure = tdiam::resultant::GenericResultant::pure_power_assignment();
    println!("specialization at pure powers = {}", res.specialize(&pure));
    println!("elapsed = {:?}", t0.elapsed());
}
