use linkey::workloads::{KeyDistribution, KeySampler, Zipf, ZIPF_THETA};

fn main() {
    let n = 100;
    let draws = 200_000;
    let mut s = KeySampler::new(KeyDistribution::Zipfian, n, 5);
    let mut counts = vec![0u32; n as usize + 1];
    for _ in 0..draws {
        counts[s.sample() as usize] += 1;
    }
    let zetan = Zipf::new(n, ZIPF_THETA).zetan();
    println!("rank  observed  expected");
    for k in 1..=15 {
        let p = counts[k] as f64 / draws as f64;
        let expect = 1.0 / ((k as f64).powf(ZIPF_THETA) * zetan);
        let bar = "#".repeat((p * 200.0) as usize);
        println!("{k:>4}  {p:>8.4}  {expect:>8.4}  {bar}");
    }
}
