fn main() {
    for profile in qf2::corpus::PROFILES {
        let t0 = std::time::Instant::now();
        match qf2::corpus::gen_profile(profile, 42, 4) {
            Ok(instances) => {
                let opts = qf2::quadform::IsotropyOptions::default();
                let mut verdicts = Vec::new();
                for inst in &instances {
                    let o = qf2::corpus::sweep_instance(inst, &opts);
                    verdicts.push(format!("{:?}{}{}", o.verdict,
                        if o.witness_verified == Some(false) { "!V" } else { "" },
                        if o.oracle_contradicts { "!O" } else { "" }));
                    if let Some(e) = &o.error { verdicts.push(format!("ERR:{e}")); }
                }
                println!("{profile}: {} instances in {:?}: {}", instances.len(), t0.elapsed(), verdicts.join(", "));
            }
            Err(e) => println!("{profile}: FAILED {e}"),
        }
    }
}
