#ifndef COND_IFDEF_H
#define COND_IFDEF_H
#ifdef _WIN32
#include <windows.h>
#else
#include <unistd.h>
#endif
#if 0
#include "dead.h"
#endif
#endif
