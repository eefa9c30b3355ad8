#![no_main]

use libfuzzer_sys::fuzz_target;
use snpcut::datamodel::{read_snp_list, write_snp_list};

fuzz_target!(|data: &[u8]| {
    let Ok(ids) = read_snp_list(data) else { return };
    let mut buf = Vec::new();
    write_snp_list(&ids, &mut buf).unwrap();
    assert_eq!(read_snp_list(buf.as_slice()).unwrap(), ids);
});
