use proptest::prelude::*;
use volstat::implied::{
    flat_vol_chain, implied_variance, ImpliedError, OptionChainSnapshot, OptionQuote, OptionRight,
};

fn strikes(forward: f64, vol: f64, t: f64, count: usize) -> Vec<f64> {
    let sd = vol * t.sqrt();
    (0..count)
        .map(|i| forward * (-5.0 * sd + 10.0 * sd * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[test]
fn flat_black_chain_recovers_vol() {
    let t = 30.0 / 365.0;
    let chain = flat_vol_chain(100.0, 0.2, t, 0.01, &strikes(100.0, 0.2, t, 40)).unwrap();
    let vol = implied_variance(&chain).unwrap().vol();
    assert!((vol / 20.0 - 1.0).abs() < 0.03, "{vol}");
}

#[test]
fn duplicate_quotes_rejected() {
    let q = OptionQuote::new(100.0, OptionRight::Put, 1.0, 1.1);
    assert!(matches!(
        OptionChainSnapshot::new(0.1, 100.0, 0.0, vec![q, q]),
        Err(ImpliedError::DuplicateStrike { .. })
    ));
}

proptest! {
    #[test]
    fn strike_scaling_invariance(c in 0.01f64..100.0, vol in 0.1f64..0.6) {
        let t = 0.1;
        let ks = strikes(100.0, vol, t, 30);
        let base = implied_variance(&flat_vol_chain(100.0, vol, t, 0.02, &ks).unwrap()).unwrap();
        let scaled_quotes: Vec<OptionQuote> = flat_vol_chain(100.0, vol, t, 0.02, &ks)
            .unwrap()
            .quotes()
            .iter()
            .map(|q| OptionQuote::new(q.strike * c, q.right, q.bid * c, q.ask * c))
            .collect();
        let scaled = OptionChainSnapshot::new(t, 100.0 * c, 0.02, scaled_quotes).unwrap();
        let v = implied_variance(&scaled).unwrap().variance;
        prop_assert!((v - base.variance).abs() <= 1e-10 * base.variance);
    }

    #[test]
    fn removing_far_wings_lowers_variance(drop in 1usize..8) {
        // every out-of-the-money contribution is positive
        let t = 0.1;
        let ks = strikes(100.0, 0.3, t, 40);
        let full = implied_variance(&flat_vol_chain(100.0, 0.3, t, 0.0, &ks).unwrap()).unwrap().variance;
        let trimmed = implied_variance(&flat_vol_chain(100.0, 0.3, t, 0.0, &ks[drop..ks.len() - drop]).unwrap())
            .unwrap()
            .variance;
        prop_assert!(trimmed <= full + 1e-9);
    }
}
