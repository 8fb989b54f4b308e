#pragma once

#include <pseudoadd/axioms.hpp>
#include <pseudoadd/content.hpp>
#include <pseudoadd/entropy.hpp>
#include <pseudoadd/expr.hpp>
#include <pseudoadd/io.hpp>
#include <pseudoadd/recover.hpp>
