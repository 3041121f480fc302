use simon32_core::pddt::*;
use simon32_core::*;
fn main() {
    let t = std::time::Instant::now();
    let p = compute_pddt(WordSize::SIMON32, 0.1, ThresholdMode::AtLeast).unwrap();
    let g = compute_pddt(WordSize::SIMON32, 0.1, ThresholdMode::Greater).unwrap();
    println!("{} {} {:?}", p.len(), g.len(), t.elapsed());
    let s = sort_differentials(&p, 0.5).unwrap();
    println!("sig {} nonsig {}", s.significant.len(), s.non_significant.len());
}
