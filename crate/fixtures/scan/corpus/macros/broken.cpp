#include <unterminated.h
#include "also
#include ""
#include <>
#include "fine.h"
