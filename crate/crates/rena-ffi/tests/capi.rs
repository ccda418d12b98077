// SPDX-License-Identifier: Apache-2.0

//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers, C strings and status codes.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rena_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { rena_string_free(p) };
    s
}

#[test]
fn coeff_table_roundtrip() {
    unsafe {
        let mut table: *mut RenaCoeffTable = ptr::null_mut();
        assert_eq!(rena_coeff_table_new(2, 8, &mut table), RenaStatus::Ok);

        // decimal access: R[6] = 1251
        let series = CString::new("R").unwrap();
        let mut buf = [0 as c_char; 32];
        let mut written = 0usize;
        let st = rena_coeff_decimal(
            table,
            series.as_ptr(),
            6,
            buf.as_mut_ptr(),
            32,
            &mut written,
        );
        assert_eq!(st, RenaStatus::Ok);
        assert_eq!(written, 4);
        let text = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert_eq!(text, "1251");

        // short buffer reports the needed size
        let st = rena_coeff_decimal(table, series.as_ptr(), 6, buf.as_mut_ptr(), 3, &mut written);
        assert_eq!(st, RenaStatus::BufferTooSmall);
        assert_eq!(written, 5);

        // unknown series / out-of-range order
        let bogus = CString::new("ZZ").unwrap();
        assert_eq!(
            rena_coeff_decimal(table, bogus.as_ptr(), 2, buf.as_mut_ptr(), 32, &mut written),
            RenaStatus::InvalidArgument
        );
        assert_eq!(
            rena_coeff_decimal(
                table,
                series.as_ptr(),
                99,
                buf.as_mut_ptr(),
                32,
                &mut written
            ),
            RenaStatus::InvalidArgument
        );

        // JSON document
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(rena_coeff_table_json(table, &mut json), RenaStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(doc["B"][6], "1263");

        rena_coeff_table_free(table);
    }
}

#[test]
fn invalid_table_arguments() {
    unsafe {
        let mut table: *mut RenaCoeffTable = ptr::null_mut();
        assert_eq!(
            rena_coeff_table_new(0, 8, &mut table),
            RenaStatus::InvalidArgument
        );
        assert_eq!(
            rena_coeff_table_new(2, 0, &mut table),
            RenaStatus::InvalidArgument
        );
    }
}

#[test]
fn expr_info_and_counts() {
    unsafe {
        let text = CString::new("((a+b)*)").unwrap();
        let mut info = std::mem::zeroed::<RenaExprInfo>();
        assert_eq!(rena_expr_info(text.as_ptr(), 2, &mut info), RenaStatus::Ok);
        assert_eq!(info.tree_size, 4);
        assert_eq!(info.alphabetic_size, 2);
        assert_eq!(info.nullable, 1);
        assert_eq!(info.in_restricted_class, 1);

        let mut counts = std::mem::zeroed::<RenaCountFunctions>();
        assert_eq!(
            rena_count_functions(text.as_ptr(), 2, &mut counts),
            RenaStatus::Ok
        );
        // the absorbing pattern has f = s = k and e = e* = k²
        assert_eq!(counts.first, 2);
        assert_eq!(counts.last, 2);
        assert_eq!(counts.follow, 4);
        assert_eq!(counts.star_follow, 4);
        assert_eq!(counts.transitions, 6);

        let bad = CString::new("(a+").unwrap();
        assert_eq!(
            rena_expr_info(bad.as_ptr(), 2, &mut info),
            RenaStatus::ParseError
        );
    }
}

#[test]
fn glushkov_json_via_ffi() {
    unsafe {
        let text = CString::new("((a.b)*)").unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            rena_glushkov_json(text.as_ptr(), 2, &mut out),
            RenaStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(doc["states"], 3);
        assert_eq!(doc["counts"]["t"], 3);
    }
}

#[test]
fn sampler_determinism_via_ffi() {
    unsafe {
        let mut sampler: *mut RenaSampler = ptr::null_mut();
        assert_eq!(
            rena_sampler_new(2, 15, RenaClass::Rena, &mut sampler),
            RenaStatus::Ok
        );
        let mut texts = Vec::new();
        for index in [0u64, 1, 2, 1, 0] {
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                rena_sample_text(sampler, 99, index, &mut out),
                RenaStatus::Ok
            );
            texts.push(take_string(out));
        }
        // (seed, index) fully determines the item, in any call order
        assert_eq!(texts[0], texts[4]);
        assert_eq!(texts[1], texts[3]);
        for t in &texts {
            let e = rena::expr::parse(t, 2).unwrap();
            assert_eq!(e.size(), 15);
        }
        rena_sampler_free(sampler);

        let mut bad: *mut RenaSampler = ptr::null_mut();
        assert_eq!(
            rena_sampler_new(0, 5, RenaClass::Re, &mut bad),
            RenaStatus::InvalidArgument
        );
    }
}

#[test]
fn theory_row_via_ffi() {
    unsafe {
        let mut row = std::mem::zeroed::<RenaTheoryRow>();
        assert_eq!(rena_theory_row(2, 0, &mut row), RenaStatus::Ok);
        assert!((row.lambda - 4.03).abs() < 0.01);
        assert!((row.letters_ratio - 0.27648).abs() < 1e-4);
        assert!(row.rho < row.eta);
        assert!(row.residual <= 1e-12);
        assert_eq!(rena_theory_row(0, 0, &mut row), RenaStatus::InvalidArgument);
    }
}
