//! Minimal end-to-end use of the library: build the k = 1890 improved code,
//! take its rate-1/2 prefix, and measure BER on BPSK/AWGN at 3 dB.

use kite_ldpc::channel::{ChannelConfig, Constellation};
use kite_ldpc::construction::{build_mother_code, CodeSpec, CodeVariant};
use kite_ldpc::qprofile::QProfile;
use kite_ldpc::sim::{simulate_ber, SimConfig};

fn main() -> kite_ldpc::Result<()> {
    let spec = CodeSpec::new(1890, CodeVariant::Improved, 1)?;
    let mother = build_mother_code(&spec, &QProfile::from_formula(1890)?)?;
    let half_rate = mother.prefix(3780)?; // every prefix is a valid code
    let sigma2 = ChannelConfig::from_ebn0_db(3.0, 0.5, 1)?.sigma2();
    let cfg = SimConfig { frames: 200, seed: 7, ..SimConfig::default() };
    let stats = simulate_ber(&half_rate, &Constellation::bpsk(), sigma2, &cfg)?;
    println!("BER {:.3e} ± {:.1e}", stats.ber, stats.ci95);
    Ok(())
}
