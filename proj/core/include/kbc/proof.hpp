#pragma once

// XML rendering of a completion proof trace.
//
// Terms are written as <var>x</var> or
// <funapp><name>f</name><arg>...</arg>...</funapp>; positions as "e" (root)
// or dotted argument paths like "1.2".

#include <iosfwd>
#include <string>

#include "kbc/completion.hpp"

namespace kbc {

void write_proof(std::ostream& out, const ProofTrace& trace, const Signature& sig, Outcome outcome);
std::string proof_xml(const ProofTrace& trace, const Signature& sig, Outcome outcome);

}  // namespace kbc
