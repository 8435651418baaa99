#pragma once
#include "last.h"