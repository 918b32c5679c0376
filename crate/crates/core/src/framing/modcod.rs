use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::constellation::Constellation;
use super::{FRAME_BITS, PILOT_BLOCK_LEN, PLHEADER_LEN, SLOT_LEN, SLOTS_PER_PILOT};
use crate::Error;

/// The three modulation-and-coding pairs exercised by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModCod {
    #[serde(rename = "MC4")]
    Mc4,
    #[serde(rename = "MC12")]
    Mc12,
    #[serde(rename = "MC24")]
    Mc24,
}

impl ModCod {
    pub const ALL: [ModCod; 3] = [ModCod::Mc4, ModCod::Mc12, ModCod::Mc24];

    pub fn name(self) -> &'static str {
        match self {
            ModCod::Mc4 => "MC4",
            ModCod::Mc12 => "MC12",
            ModCod::Mc24 => "MC24",
        }
    }

    /// MODCOD field value carried in the PLS code.
    pub fn pls_index(self) -> u8 {
        match self {
            ModCod::Mc4 => 4,
            ModCod::Mc12 => 12,
            ModCod::Mc24 => 24,
        }
    }

    pub fn constellation(self) -> Constellation {
        match self {
            ModCod::Mc4 => Constellation::Qpsk,
            ModCod::Mc12 => Constellation::Psk8,
            ModCod::Mc24 => Constellation::Apsk32,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.constellation().bits_per_symbol()
    }

    /// Code rate as (numerator, denominator).
    pub fn code_rate(self) -> (u32, u32) {
        match self {
            ModCod::Mc4 => (1, 2),
            ModCod::Mc12 => (3, 5),
            ModCod::Mc24 => (3, 4),
        }
    }

    pub fn code_rate_f64(self) -> f64 {
        let (n, d) = self.code_rate();
        n as f64 / d as f64
    }

    /// 1504-bit packets carried per frame.
    pub fn packets_per_frame(self) -> usize {
        match self {
            ModCod::Mc4 => 4,
            ModCod::Mc12 => 6,
            ModCod::Mc24 => 7,
        }
    }

    pub fn payload_symbols(self) -> usize {
        FRAME_BITS / self.bits_per_symbol()
    }

    pub fn slots(self) -> usize {
        self.payload_symbols() / SLOT_LEN
    }

    pub fn pilot_block_count(self) -> usize {
        (self.slots() - 1) / SLOTS_PER_PILOT
    }

    /// Total PLFRAME length in symbols, header included.
    pub fn frame_len(self, pilots: bool) -> usize {
        let pilots_len = if pilots {
            PILOT_BLOCK_LEN * self.pilot_block_count()
        } else {
            0
        };
        PLHEADER_LEN + self.payload_symbols() + pilots_len
    }
}

impl fmt::Display for ModCod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModCod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "MC4" | "4" => Ok(ModCod::Mc4),
            "MC12" | "12" => Ok(ModCod::Mc12),
            "MC24" | "24" => Ok(ModCod::Mc24),
            _ => Err(Error::InvalidParameter(format!("unknown MODCOD {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(ModCod::Mc4.bits_per_symbol(), 2);
        assert_eq!(ModCod::Mc12.bits_per_symbol(), 3);
        assert_eq!(ModCod::Mc24.bits_per_symbol(), 5);
        assert_eq!(ModCod::Mc4.code_rate(), (1, 2));
        assert_eq!(ModCod::Mc12.code_rate(), (3, 5));
        assert_eq!(ModCod::Mc24.code_rate(), (3, 4));
        let packets: Vec<_> = ModCod::ALL.iter().map(|m| m.packets_per_frame()).collect();
        assert_eq!(packets, [4, 6, 7]);
    }

    #[test]
    fn frame_bits_divisible_by_bits_per_symbol() {
        for m in ModCod::ALL {
            assert_eq!(FRAME_BITS % m.bits_per_symbol(), 0);
            assert_eq!(m.payload_symbols() % SLOT_LEN, 0);
        }
    }

    #[test]
    fn frame_lengths() {
        let with: Vec<_> = ModCod::ALL.iter().map(|m| m.frame_len(true)).collect();
        let without: Vec<_> = ModCod::ALL.iter().map(|m| m.frame_len(false)).collect();
        assert_eq!(with, [8370, 5598, 3402]);
        assert_eq!(without, [8190, 5490, 3330]);
    }

    #[test]
    fn parse_names() {
        assert_eq!("mc24".parse::<ModCod>().unwrap(), ModCod::Mc24);
        assert_eq!("12".parse::<ModCod>().unwrap(), ModCod::Mc12);
        assert!("MC5".parse::<ModCod>().is_err());
    }
}
