#pragma once

#include "labelpeg/expression.hpp"
#include "labelpeg/grammar.hpp"
#include "labelpeg/validate.hpp"
#include "labelpeg/print.hpp"
#include "labelpeg/failure.hpp"
#include "labelpeg/engine.hpp"
#include "labelpeg/transforms.hpp"
#include "labelpeg/grammar_text.hpp"
#include "labelpeg/diagnostics.hpp"
#include "labelpeg/cli.hpp"
