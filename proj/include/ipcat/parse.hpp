#pragma once

#include <stdexcept>
#include <string>

#include "ipcat/fat.hpp"
#include "ipcat/ipc.hpp"

// Concrete syntax, shared by files and the CLI:
//
//   terms    \x:A. M    M N    <M, N>    M.1    M.2
//            inl[A | B] M    inr[A | B] M
//            case M of {x:A => P | y:B => Q} : C    abort[A] M
//   types    X    _|_    A -> B    A /\ B    A \/ B
//
// and in the polymorphic calculus additionally
//
//   terms    /\X. M    M [Y]
//   types    forall X. A        (no _|_ or \/)
//
// Application is left-associative; projections and [Y] bind tighter. The
// operand of inl/inr/abort is a postfix atom, so "f inl[A|B] x y" reads
// as ((f (inl x)) y). -> associates right, /\ and \/ left.
namespace ipcat::parse {

struct SyntaxError : std::runtime_error {
  SyntaxError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

ipc::TermRef ipc_term(const std::string& text);
ipc::TypeRef ipc_type(const std::string& text);
fat::TermRef fat_term(const std::string& text);
fat::TypeRef fat_type(const std::string& text);

}  // namespace ipcat::parse
