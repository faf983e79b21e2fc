use qf2::quadform::{IsotropyOptions, QuadForm};

fn main() {
    let tower = qf2::field::parse_tower("F2(t,u,v,w)").unwrap();
    let opts = IsotropyOptions::default();
    for (phi_s, psi_s, profile) in [
        ("u*v*[1,u+v] + <1,u,v>", "<t>", "1.1(1)"),
        ("t*u*[1,t+u] + <1,t,u>", "<v>", "1.1(1)"),
        ("w*t*u*[1,t+u] + w*<1,t,u>", "<v>", "1.1(1)"),
    ] {
        let phi = QuadForm::parse(&tower, phi_s).unwrap();
        let psi = QuadForm::parse(&tower, psi_s).unwrap();
        match qf2::corpus::screen_pair(&phi, &psi, profile, &opts) {
            Ok(lines) => println!("OK {phi_s}: {lines:?}"),
            Err(e) => println!("FAIL {phi_s}: {e}"),
        }
    }
}
