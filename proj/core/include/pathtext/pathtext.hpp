#pragma once

#include "pathtext/binary_solvers.hpp"
#include "pathtext/boosted_trees.hpp"
#include "pathtext/classifiers.hpp"
#include "pathtext/corpus.hpp"
#include "pathtext/csv.hpp"
#include "pathtext/error.hpp"
#include "pathtext/eval.hpp"
#include "pathtext/keywords.hpp"
#include "pathtext/label_encoding.hpp"
#include "pathtext/lda.hpp"
#include "pathtext/preprocess.hpp"
#include "pathtext/random.hpp"
#include "pathtext/render.hpp"
#include "pathtext/sparse.hpp"
#include "pathtext/text_io.hpp"
#include "pathtext/vectorizer.hpp"
