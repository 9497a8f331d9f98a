#pragma once

#include "foldscope/appearance.hpp"
#include "foldscope/classifier.hpp"
#include "foldscope/dfao.hpp"
#include "foldscope/error.hpp"
#include "foldscope/fold.hpp"
#include "foldscope/instructions.hpp"
#include "foldscope/sign.hpp"
#include "foldscope/verification.hpp"
