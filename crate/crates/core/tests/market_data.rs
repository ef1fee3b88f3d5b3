use proptest::prelude::*;
use volstat::market_data::{
    align, parse_price_csv, scan_price_csv, ColumnMapping, DatedSeries, PriceSeries, TradingDate,
};

fn series_strategy() -> impl Strategy<Value = Vec<(TradingDate, f64)>> {
    prop::collection::btree_map(0i64..5000, 1e-3f64..1e5, 1..120).prop_map(|m| {
        let base = TradingDate::from_ymd(1990, 1, 2).unwrap();
        m.into_iter().map(|(d, v)| (base.plus_days(d), v)).collect()
    })
}

proptest! {
    #[test]
    fn csv_round_trip(points in series_strategy()) {
        let series = PriceSeries::new(points.clone()).unwrap();
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let back = parse_price_csv(&buf[..], &ColumnMapping::default()).unwrap();
        prop_assert_eq!(back.dated_values(), points);
    }

    #[test]
    fn row_order_does_not_matter(points in series_strategy(), seed in any::<u64>()) {
        let mut shuffled = points.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed.wrapping_mul(i as u64 + 7) % (i as u64 + 1)) as usize);
        }
        let mut text = String::from("Date,Close\n");
        for (d, v) in &shuffled {
            text.push_str(&format!("{d},{v}\n"));
        }
        let parsed = parse_price_csv(text.as_bytes(), &ColumnMapping::default()).unwrap();
        prop_assert_eq!(parsed.dated_values(), points);
    }

    #[test]
    fn accepted_plus_rejected_is_row_count(points in series_strategy(), bad in prop::collection::vec(0usize..4, 0..20)) {
        let mut text = String::from("Date,Close\n");
        for (d, v) in &points {
            text.push_str(&format!("{d},{v}\n"));
        }
        for kind in &bad {
            text.push_str(match kind {
                0 => "not-a-date,1.0\n",
                1 => "2001-01-01,abc\n",
                2 => "2001-01-01,-5\n",
                _ => "2001-01-01\n",
            });
        }
        let outcome = scan_price_csv(text.as_bytes(), &ColumnMapping::default()).unwrap();
        prop_assert_eq!(outcome.accepted.len() + outcome.rejected.len(), outcome.row_count);
        prop_assert_eq!(outcome.row_count, points.len() + bad.len());
    }

    #[test]
    fn align_is_idempotent(a in series_strategy(), b in series_strategy()) {
        let sa = PriceSeries::new(a).unwrap();
        let sb = PriceSeries::new(b).unwrap();
        if let Ok(panel) = align(&[("a", &sa as &dyn DatedSeries), ("b", &sb)]) {
            let pa = panel.series(0).unwrap();
            let pb = panel.series(1).unwrap();
            let again = align(&[("a", &pa as &dyn DatedSeries), ("b", &pb)]).unwrap();
            prop_assert_eq!(again, panel);
        }
    }
}
