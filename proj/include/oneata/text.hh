#pragma once

#include "oneata/ata.hh"

#include <string>

namespace oneata {

/// Parses the ATA DSL:
///   ata NAME; alphabet a b; [locations q0 q1;] init q0; accepting q0;
///   q0 -a-> (q0 & x.q1) | ([1,1] & ~x.q2);
/// Repeated (q,a) lines are joined disjunctively. Throws std::invalid_argument
/// with a line/column position.
OneATA parse_ata(const std::string &text);
std::string print_ata(const OneATA &a);
std::string print_clause(const Clause &c, const OneATA &a);

} // namespace oneata
