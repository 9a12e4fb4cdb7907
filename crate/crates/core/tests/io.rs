use mmfilt::curve::linear_grid;
use mmfilt::io::design::{read_design, write_design, DesignDocument};
use mmfilt::io::touchstone::{
    read_touchstone, write_touchstone, DataFormat, FrequencyUnit, NetworkData, OnePort,
};
use mmfilt::network::{SMatrix, SParameterBlock};
use mmfilt::synthesis::{synthesize_ladder, DesignSpec};
use mmfilt::ComplexCurve;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FORMATS: [DataFormat; 3] = [DataFormat::RI, DataFormat::MA, DataFormat::DB];
const UNITS: [FrequencyUnit; 4] = [
    FrequencyUnit::Hz,
    FrequencyUnit::KHz,
    FrequencyUnit::MHz,
    FrequencyUnit::GHz,
];

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(1e-4..1.0), rng.random_range(-3.1..3.1))
}

fn random_block(rng: &mut ChaCha8Rng) -> SParameterBlock {
    let n = rng.random_range(2..200);
    let freqs = linear_grid(rng.random_range(1e8..1e9), rng.random_range(2e9..90e9), n).unwrap();
    let mats = (0..n)
        .map(|_| SMatrix {
            s11: random_complex(rng),
            s21: random_complex(rng),
            s12: random_complex(rng),
            s22: random_complex(rng),
        })
        .collect();
    SParameterBlock::new(freqs, mats, rng.random_range(10.0..100.0)).unwrap()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + b.norm())
}

fn assert_blocks_match(a: &SParameterBlock, b: &SParameterBlock) {
    assert_eq!(a.len(), b.len());
    assert_eq!(a.z0(), b.z0());
    for (fa, fb) in a.freqs().iter().zip(b.freqs()) {
        assert!((fa - fb).abs() <= 1e-12 * fb);
    }
    for (x, y) in a.matrices().iter().zip(b.matrices()) {
        assert!(
            close(x.s11, y.s11)
                && close(x.s21, y.s21)
                && close(x.s12, y.s12)
                && close(x.s22, y.s22)
        );
    }
}

#[test]
fn two_port_round_trip_in_every_format() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..20 {
        let block = random_block(&mut rng);
        let data = NetworkData::TwoPort(block.clone());
        for format in FORMATS {
            let text = write_touchstone(&data, UNITS[i % 4], format);
            let (header, back) = read_touchstone(&text, 2).unwrap();
            assert_eq!(header.format, format);
            let NetworkData::TwoPort(back) = back else {
                panic!("expected two-port data")
            };
            assert_blocks_match(&back, &block);
        }
    }
}

#[test]
fn formats_agree_with_each_other() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let block = random_block(&mut rng);
    let data = NetworkData::TwoPort(block);
    let decoded: Vec<SParameterBlock> = FORMATS
        .iter()
        .map(|&f| {
            match read_touchstone(&write_touchstone(&data, FrequencyUnit::GHz, f), 2)
                .unwrap()
                .1
            {
                NetworkData::TwoPort(b) => b,
                NetworkData::OnePort(_) => unreachable!(),
            }
        })
        .collect();
    assert_blocks_match(&decoded[1], &decoded[0]);
    assert_blocks_match(&decoded[2], &decoded[0]);
}

#[test]
fn one_port_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let freqs = linear_grid(1e9, 40e9, 57).unwrap();
    let values = (0..57).map(|_| random_complex(&mut rng)).collect();
    let s11 = ComplexCurve::new(freqs, values).unwrap();
    let data = NetworkData::OnePort(OnePort {
        s11: s11.clone(),
        z0: 50.0,
    });
    for format in FORMATS {
        let (_, back) =
            read_touchstone(&write_touchstone(&data, FrequencyUnit::MHz, format), 1).unwrap();
        let NetworkData::OnePort(back) = back else {
            panic!("expected one-port data")
        };
        for (a, b) in back.s11.values().iter().zip(s11.values()) {
            assert!(close(*a, *b));
        }
    }
}

#[test]
fn synthesized_design_survives_a_file_round_trip() {
    let spec = DesignSpec {
        fc_target: 23.5e9,
        fbw_target: 0.16,
        z0: 50.0,
        oob_min_db: 12.0,
        k2: 0.46,
        q: 50.0,
        rs: 0.0,
        ls: 0.0,
        il_max_db: 2.0,
    };
    let r = synthesize_ladder(&spec).unwrap();
    let mut doc = DesignDocument::from_ladder(&r.design).unwrap();
    doc.spec = Some(spec);
    let back = read_design(&write_design(&doc)).unwrap();
    assert_eq!(back, doc);
    let ladder = back.ladder().unwrap();
    for (a, b) in ladder.elements().iter().zip(r.design.elements()) {
        assert_eq!(ladder.resonator_of(a), r.design.resonator_of(b));
    }
}

#[test]
fn random_design_documents_round_trip_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let mut p = || mmfilt::MbvdParams {
            rm: rng.random_range(0.0..20.0),
            lm: rng.random_range(1e-10..1e-8),
            cm: rng.random_range(1e-15..1e-13),
            c0: rng.random_range(1e-14..1e-12),
            rs: rng.random_range(0.0..5.0),
            ls: rng.random_range(0.0..1e-10),
            r0: rng.random_range(0.0..1.0),
        };
        let doc = DesignDocument {
            series: Some(p()),
            shunt: Some(p()),
            filter: None,
            spec: None,
        };
        assert_eq!(read_design(&write_design(&doc)).unwrap(), doc);
    }
}
