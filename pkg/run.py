import torclosed

torclosed.main()
